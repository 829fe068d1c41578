"""K+1 switch-disjoint path allocation on the node-split switch graph.

Every switch ``u`` becomes an ``(u, u')`` pair joined by a split edge; a path
from core ``a`` to core ``b`` enters ``u`` from ``a`` or from some ``v'``,
crosses the split edge, and leaves ``u'`` towards ``b`` or another switch.
Capping the split-edge usage at one per flow turns switch-disjointness into
edge-disjointness.

Flows are routed one at a time in descending bandwidth order, each through an
exact binary ILP. Within one flow a switch is visited at most once, so a new
link raises ``op_u`` and ``ip_v`` by exactly one and the incremental switch
power is linear in the link variables.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import mapping
from .errors import GrowthExhausted, Infeasible
from .model import CommGraph, DesignConfig, Flow, RoutingSet, Topology, flows_by_bandwidth, manhattan, path_links
from .optim.ilp import EQ, LE, IlpModel, solve_ilp
from .power import PowerTables, t_sw

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitGraph:
    """Node-split routing graph.

    Vertices are ``("c", i)``, ``("s", u)`` and ``("s'", u)``. Edges are kept
    per class: ``cs`` holds ``(core, switch)`` core-to-switch attachments,
    ``sc`` holds ``(switch, core)``, ``split`` holds switch ids and ``link``
    holds ordered ``(u, v)`` pairs standing for ``u' -> v``.
    """

    n_sw: int
    cs: frozenset
    sc: frozenset
    split: frozenset
    link: frozenset

    def vertices(self) -> set:
        v = {("c", c) for c, _ in self.cs} | {("c", c) for _, c in self.sc}
        for u in self.split:
            v |= {("s", u), ("s'", u)}
        return v

    def edges(self) -> list[tuple]:
        out = [(("c", c), ("s", u)) for c, u in sorted(self.cs)]
        out += [(("s", u), ("s'", u)) for u in sorted(self.split)]
        out += [(("s'", u), ("s", v)) for u, v in sorted(self.link)]
        out += [(("s'", u), ("c", c)) for u, c in sorted(self.sc)]
        return out


def build_split_graph(topology: Topology) -> SplitGraph:
    n = topology.n_sw
    cs = frozenset((c, s) for c, s, d in topology.cs_links if d == "cs")
    sc = frozenset((s, c) for c, s, d in topology.cs_links if d == "sc")
    link = frozenset((u, v) for u in range(n) for v in range(n) if u != v)
    return SplitGraph(n, cs, sc, frozenset(range(n)), link)


@dataclass
class AllocState:
    """Mutable bookkeeping while flows are routed one by one."""

    bw_max: float
    ip: list
    op: list
    opened: set = field(default_factory=set)
    load: dict = field(default_factory=dict)  # committed traffic per opened link
    paths: dict = field(default_factory=dict)  # flow index -> tuple of paths

    @classmethod
    def initial(cls, topology: Topology, bw_max: float) -> "AllocState":
        n = topology.n_sw
        ip = [len(topology.core_inports(s)) for s in range(n)]
        op = [len(topology.core_outports(s)) for s in range(n)]
        for u, v in topology.ss_links:
            op[u] += 1
            ip[v] += 1
        st = cls(bw_max, ip, op, set(topology.ss_links))
        st.load = {e: 0.0 for e in st.opened}
        return st

    def residual(self, u: int, v: int) -> float:
        return self.bw_max - self.load.get((u, v), 0.0)

    def commit(self, idx: int, flow: Flow, paths, reserve_all: bool = False) -> None:
        for k, p in enumerate(paths):
            for u, v in path_links(p):
                if (u, v) not in self.opened:
                    self.opened.add((u, v))
                    self.load[(u, v)] = 0.0
                    self.op[u] += 1
                    self.ip[v] += 1
                if k == 0 or reserve_all:
                    self.load[(u, v)] += flow.bandwidth
        self.paths[idx] = tuple(tuple(p) for p in paths)


def _link_usable(st: AllocState, u: int, v: int, f: Flow, max_size: int) -> bool:
    if st.residual(u, v) < f.bandwidth:
        return False
    if (u, v) in st.opened:
        return True
    return st.op[u] < max_size and st.ip[v] < max_size


def prune_for_flow(g: SplitGraph, st: AllocState, f: Flow, max_size: int) -> SplitGraph:
    """Drop links lacking bandwidth or port room, then switches nobody can cross.

    A saturated switch (``ip`` or ``op`` at ``max_size``) loses the new links
    that would overflow it. It is removed outright when it is not attached to
    the flow's endpoints and no usable link remains on one of its sides.
    """
    link = {(u, v) for u, v in g.link if _link_usable(st, u, v, f, max_size)}
    attached = {u for c, u in g.cs if c == f.src} | {u for u, c in g.sc if c == f.dst}
    keep = set()
    for u in g.split:
        saturated = st.ip[u] >= max_size or st.op[u] >= max_size
        if not saturated or u in attached:
            keep.add(u)
            continue
        has_in = any(b == u for _, b in link)
        has_out = any(a == u for a, _ in link)
        if has_in and has_out:
            keep.add(u)
    link = {(u, v) for u, v in link if u in keep and v in keep}
    cs = frozenset((c, u) for c, u in g.cs if u in keep)
    sc = frozenset((u, c) for u, c in g.sc if u in keep)
    return SplitGraph(g.n_sw, cs, sc, frozenset(keep), frozenset(link))


def link_cost(f: Flow, u: int, v: int, k: int, st: AllocState, topology: Topology,
              cfg: DesignConfig, tables: PowerTables) -> float:
    """Cost of path ``k`` of ``f`` crossing ``u -> v`` given the current state."""
    cost = 0.0
    if k == 0 or cfg.link_cost_all_paths:
        cost += cfg.e_bit * f.bandwidth * manhattan(topology.pos(u), topology.pos(v))
    if (u, v) not in st.opened:
        cost += cfg.c_pl + tables.c_sw + (t_sw(tables, st.ip[v] + 1) - t_sw(tables, st.ip[v]))
    return cost


@dataclass
class FlowModel:
    model: IlpModel
    src: dict  # (k, u) -> var
    split: dict  # (k, u) -> var
    link: dict  # (k, u, v) -> var
    sink: dict  # (k, u) -> var


def build_flow_model(f: Flow, g: SplitGraph, st: AllocState, topology: Topology,
                     cfg: DesignConfig, name: str = "flow") -> FlowModel:
    tables = PowerTables.from_config(cfg)
    m = IlpModel(name)
    srcs = sorted(u for c, u in g.cs if c == f.src)
    sinks = sorted(u for u, c in g.sc if c == f.dst)
    nodes = sorted(g.split)
    links = sorted(g.link)
    fm = FlowModel(m, {}, {}, {}, {})
    for k in range(cfg.K + 1):
        for u in srcs:
            fm.src[k, u] = m.add_var(f"a_{k}_{u}")
        for u in nodes:
            fm.split[k, u] = m.add_var(f"s_{k}_{u}")
        for u, v in links:
            fm.link[k, u, v] = m.add_var(f"l_{k}_{u}_{v}", link_cost(f, u, v, k, st, topology, cfg, tables))
        for u in sinks:
            fm.sink[k, u] = m.add_var(f"b_{k}_{u}")
    for k in range(cfg.K + 1):
        m.add_constraint({fm.src[k, u]: 1 for u in srcs}, EQ, 1, f"src_{k}")
        m.add_constraint({fm.sink[k, u]: 1 for u in sinks}, EQ, 1, f"dst_{k}")
        for u in nodes:
            inflow = {fm.split[k, u]: -1.0}
            if (k, u) in fm.src:
                inflow[fm.src[k, u]] = 1.0
            for a, b in links:
                if b == u:
                    inflow[fm.link[k, a, b]] = 1.0
            m.add_constraint(inflow, EQ, 0, f"in_{k}_{u}")
            outflow = {fm.split[k, u]: 1.0}
            if (k, u) in fm.sink:
                outflow[fm.sink[k, u]] = -1.0
            for a, b in links:
                if a == u:
                    outflow[fm.link[k, a, b]] = -1.0
            m.add_constraint(outflow, EQ, 0, f"out_{k}_{u}")
        m.add_constraint({fm.split[k, u]: 1 for u in nodes}, LE, f.latency_limit, f"lat_{k}")
    for u in nodes:
        m.add_constraint({fm.split[k, u]: 1 for k in range(cfg.K + 1)}, LE, 1, f"disj_{u}")
    return fm


def _extract(fm: FlowModel, x, K: int) -> list[tuple]:
    paths = []
    for k in range(K + 1):
        u = next(u for (kk, u), j in sorted(fm.src.items()) if kk == k and x[j])
        path = [u]
        while not ((k, u) in fm.sink and x[fm.sink[k, u]]):
            nxt = [v for (kk, a, v), j in sorted(fm.link.items()) if kk == k and a == u and x[j]]
            if not nxt:
                break
            u = nxt[0]
            if u in path:
                raise RuntimeError("cycle while extracting path")
            path.append(u)
        paths.append(tuple(path))
    return paths


def allocate_flow(f: Flow, g: SplitGraph, st: AllocState, topology: Topology,
                  cfg: DesignConfig) -> tuple[list[tuple], float]:
    """Exact cheapest K+1 switch-disjoint paths for one flow; ``(paths, objective)``."""
    srcs = [u for c, u in g.cs if c == f.src]
    sinks = [u for u, c in g.sc if c == f.dst]
    if len(srcs) < cfg.K + 1 or len(sinks) < cfg.K + 1:
        raise Infeasible(f"flow {f.src}->{f.dst}: fewer than K+1 usable attachments")
    fm = build_flow_model(f, g, st, topology, cfg, f"flow_{f.src}_{f.dst}")
    res = solve_ilp(fm.model, backend=cfg.ilp_backend)
    return _extract(fm, res.x, cfg.K), res.objective


def _check_ports(topology: Topology, max_size: int) -> None:
    for s in range(topology.n_sw):
        if len(topology.core_inports(s)) > max_size or len(topology.core_outports(s)) > max_size:
            raise Infeasible(f"switch {s}: core ports exceed max_size")


def route_flows(ccg: CommGraph, topology: Topology, cfg: DesignConfig) -> tuple[Topology, RoutingSet]:
    """Sequential allocation on a fixed mapping; raises ``Infeasible`` on the first failure."""
    _check_ports(topology, cfg.max_size)
    st = AllocState.initial(topology, cfg.bw_max)
    g = build_split_graph(topology)
    for idx in flows_by_bandwidth(ccg.flows):
        f = ccg.flows[idx]
        paths, _ = allocate_flow(f, prune_for_flow(g, st, f, cfg.max_size), st, topology, cfg)
        st.commit(idx, f, paths, cfg.reserve_alt_bandwidth)
    routing = RoutingSet(ccg.flows, tuple(st.paths[i] for i in range(len(ccg.flows))))
    return Topology(topology.switches, topology.cs_links, frozenset(st.opened)), routing


def allocate_all(ccg: CommGraph, cfg: DesignConfig, switches=None) -> tuple[Topology, RoutingSet]:
    """Placement, mapping and sequential allocation with switch-count growth.

    With ``switches`` given the placement is fixed and no growth happens.
    """
    if switches is not None:
        return route_flows(ccg, mapping.map_both(ccg, switches, cfg), cfg)
    start = max(cfg.n_sw, mapping.min_switches(ccg, cfg))
    last = None
    for n_sw in range(start, start + cfg.max_switch_growth + 1):
        sw = mapping.place_switches(ccg, n_sw)
        try:
            return route_flows(ccg, mapping.map_both(ccg, sw, cfg), cfg)
        except Infeasible as e:
            log.info("n_sw=%d infeasible: %s", n_sw, e)
            last = e
    raise GrowthExhausted(f"no feasible allocation up to {start + cfg.max_switch_growth} switches: {last}")


def allocate_joint(ccg: CommGraph, topology: Topology, cfg: DesignConfig) -> tuple[Topology, RoutingSet, float]:
    """All flows in one ILP with exact port-dependent switch power.

    Exponential; meant as an oracle for a handful of flows on a few switches.
    Bandwidth binds every path, including alternatives.
    """
    tables = PowerTables.from_config(cfg)
    n = topology.n_sw
    if n > 4 or len(ccg.flows) > 6:
        raise ValueError("joint allocation is restricted to <= 4 switches and <= 6 flows")
    _check_ports(topology, cfg.max_size)
    m = IlpModel("joint")
    base = AllocState.initial(Topology(topology.switches, topology.cs_links), cfg.bw_max)
    links = [(u, v) for u in range(n) for v in range(n) if u != v]
    d = {e: m.add_var(f"d_{e[0]}_{e[1]}", cfg.c_pl + tables.c_sw) for e in links}
    g = build_split_graph(topology)
    models = []
    for i, f in enumerate(ccg.flows):
        fm = build_flow_model(f, g, base, topology, cfg.with_(link_cost_all_paths=False), f"f{i}")
        models.append(fm)
    # merge the per-flow models into one, with traffic-only link costs
    offset = []
    for i, fm in enumerate(models):
        off = m.n_vars
        offset.append(off)
        f = ccg.flows[i]
        for j, name in enumerate(fm.model.var_names):
            m.add_var(f"f{i}_{name}")
        for (k, u, v), j in fm.link.items():
            if k == 0:
                m.add_cost(off + j, cfg.e_bit * f.bandwidth * manhattan(topology.pos(u), topology.pos(v)))
        for coeffs, sense, rhs, rname in fm.model.rows:
            m.add_constraint({off + j: a for j, a in coeffs.items()}, sense, rhs, f"f{i}_{rname}")
    for e in links:
        users = [offset[i] + j for i, fm in enumerate(models)
                 for (k, u, v), j in fm.link.items() if (u, v) == e]
        for j in users:
            m.add_constraint({j: 1, d[e]: -1}, LE, 0, f"open_{e[0]}_{e[1]}")
        m.add_constraint({d[e]: 1, **{j: -1 for j in users}}, LE, 0, f"used_{e[0]}_{e[1]}")
        bw = {}
        for i, fm in enumerate(models):
            for (k, u, v), j in fm.link.items():
                if (u, v) == e:
                    bw[offset[i] + j] = ccg.flows[i].bandwidth
        if bw:
            m.add_constraint(bw, LE, cfg.bw_max, f"bw_{e[0]}_{e[1]}")
    const = 0.0
    for u in range(n):
        cip, cop = base.ip[u], base.op[u]
        const += tables.c_sw * cop
        ins = [e for e in links if e[1] == u]
        outs = [e for e in links if e[0] == u]
        hi = min(cfg.max_size, cip + len(ins))
        y = {x: m.add_var(f"y_{u}_{x}", t_sw(tables, x)) for x in range(cip, hi + 1)}
        m.add_constraint({j: 1 for j in y.values()}, EQ, 1, f"onehot_{u}")
        row = {j: float(x) for x, j in y.items()}
        for e in ins:
            row[d[e]] = row.get(d[e], 0.0) - 1.0
        m.add_constraint(row, EQ, cip, f"ip_{u}")
        m.add_constraint({d[e]: 1 for e in outs}, LE, cfg.max_size - cop, f"op_{u}")
    m.constant = const
    res = solve_ilp(m, backend=cfg.ilp_backend)
    x = res.x
    opened = frozenset(e for e in links if x[d[e]])
    paths = []
    for i, fm in enumerate(models):
        sub = x[offset[i]:offset[i] + fm.model.n_vars]
        paths.append(tuple(_extract(fm, sub, cfg.K)))
    return Topology(topology.switches, topology.cs_links, opened), RoutingSet(ccg.flows, tuple(paths)), res.objective
