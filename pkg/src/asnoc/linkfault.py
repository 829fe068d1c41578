"""Joint core mapping and routing when only switch-to-switch links fail.

Each core sits on exactly one switch, attached by one link per direction, so
all K+1 paths of a flow share its two core links. Disjointness is therefore imposed on
switch-to-switch links only; paths may revisit switches, and a flow whose
endpoints sit on the same switch needs no inter-switch link at all.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass

from . import mapping
from .errors import GrowthExhausted, Infeasible
from .model import (CORE_TO_SWITCH, SWITCH_TO_CORE, CommGraph, DesignConfig, RoutingSet, Topology,
                    manhattan)
from .optim.ilp import EQ, LE, IlpModel, solve_ilp
from .power import PowerTables, t_sw

log = logging.getLogger(__name__)

DIRECTED = "directed"
FTTG = "fttg"


@dataclass(frozen=True)
class LinkFaultResult:
    topology: Topology
    routing: RoutingSet
    objective: float
    mode: str


def initial_switches(n_core: int, max_size: int) -> int:
    """Switch count leaving one port per switch for inter-switch links."""
    if max_size < 2:
        raise ValueError("max_size must be >= 2 in link-fault mode")
    return max(1, math.ceil(n_core / (max_size - 1)))


def _bfs(links, start: int, end: int):
    if start == end:
        return (start,)
    nbrs = {}
    for u, v in sorted(links):
        nbrs.setdefault(u, []).append(v)
    prev = {start: None}
    q = deque([start])
    while q:
        u = q.popleft()
        for v in nbrs.get(u, ()):
            if v not in prev:
                prev[v] = u
                if v == end:
                    out = [v]
                    while prev[out[-1]] is not None:
                        out.append(prev[out[-1]])
                    return tuple(reversed(out))
                q.append(v)
    return None


def build_link_model(ccg: CommGraph, switches, cfg: DesignConfig, mode: str = DIRECTED,
                     e_r_bit: float = 1.0, e_l_bit: float | None = None, core_wires: bool = False):
    """The joint ILP and its variable maps ``(model, a, b, d, x)``."""
    tables = PowerTables.from_config(cfg)
    e_l = cfg.e_bit if e_l_bit is None else e_l_bit
    n = len(switches)
    cores = range(ccg.n_core)
    links = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = IlpModel(f"link_{mode}")
    fttg = mode == FTTG

    def dist(p, q):
        return 1.0 if fttg else manhattan(p, q)

    a, b = {}, {}
    for c in cores:
        out_bw, in_bw = ccg.out_bandwidth(c), ccg.in_bandwidth(c)
        for u in range(n):
            wires = core_wires and not fttg
            ca = 0.0 if not wires else cfg.e_bit * out_bw * dist(ccg.cores[c].pos, switches[u].pos)
            cb = 0.0 if not wires else cfg.e_bit * in_bw * dist(ccg.cores[c].pos, switches[u].pos)
            a[c, u] = m.add_var(f"a_{c}_{u}", ca)
            b[u, c] = m.add_var(f"b_{u}_{c}", cb + (0.0 if fttg else tables.c_sw))
    d = {e: m.add_var(f"d_{e[0]}_{e[1]}", 0.0 if fttg else cfg.c_pl + tables.c_sw) for e in links}
    x = {}
    for i, f in enumerate(ccg.flows):
        for k in range(cfg.K + 1):
            for u, v in links:
                if fttg:
                    cost = f.bandwidth * (e_r_bit + e_l) if k == 0 else 0.0
                else:
                    cost = cfg.e_bit * f.bandwidth * dist(switches[u].pos, switches[v].pos) if k == 0 else 0.0
                x[i, k, u, v] = m.add_var(f"x_{i}_{k}_{u}_{v}", cost)
    if fttg:
        m.constant = sum(f.bandwidth * (e_r_bit + 2 * e_l) for f in ccg.flows)

    for c in cores:
        m.add_constraint({a[c, u]: 1 for u in range(n)}, EQ, 1, f"attach_in_{c}")
        m.add_constraint({b[u, c]: 1 for u in range(n)}, EQ, 1, f"attach_out_{c}")
        # a core sits on one switch: its inport and outport share it
        for u in range(n):
            m.add_constraint({a[c, u]: 1, b[u, c]: -1}, EQ, 0, f"same_{c}_{u}")
    for i, f in enumerate(ccg.flows):
        for k in range(cfg.K + 1):
            for u in range(n):
                row = {a[f.src, u]: 1.0, b[u, f.dst]: -1.0}
                for p, q in links:
                    if q == u:
                        row[x[i, k, p, q]] = row.get(x[i, k, p, q], 0.0) + 1.0
                    if p == u:
                        row[x[i, k, p, q]] = row.get(x[i, k, p, q], 0.0) - 1.0
                m.add_constraint(row, EQ, 0, f"flow_{i}_{k}_{u}")
            m.add_constraint({x[i, 0, u, v]: 1 for u, v in links}, LE, f.latency_limit - 1, f"lat_{i}")
        for e in links:
            m.add_constraint({x[i, k, e[0], e[1]]: 1 for k in range(cfg.K + 1)}, LE, 1, f"disj_{i}_{e}")
            for k in range(cfg.K + 1):
                m.add_constraint({x[i, k, e[0], e[1]]: 1, d[e]: -1}, LE, 0, f"open_{i}_{k}_{e}")
    for e in links:
        row = {x[i, k, e[0], e[1]]: f.bandwidth for i, f in enumerate(ccg.flows) for k in range(cfg.K + 1)}
        if row:
            m.add_constraint(row, LE, cfg.bw_max, f"bw_{e}")
        if fttg and e[0] < e[1]:
            m.add_constraint({d[e]: 1, d[e[1], e[0]]: -1}, EQ, 0, f"sym_{e}")
    for u in range(n):
        cin = {a[c, u]: 1 for c in cores}
        cout = {b[u, c]: 1 for c in cores}
        m.add_constraint(cin, LE, cfg.max_size - 1, f"core_in_{u}")
        m.add_constraint(cout, LE, cfg.max_size - 1, f"core_out_{u}")
        ip = dict(cin)
        for e in links:
            if e[1] == u:
                ip[d[e]] = 1
        op = dict(cout)
        for e in links:
            if e[0] == u:
                op[d[e]] = 1
        m.add_constraint(op, LE, cfg.max_size, f"op_{u}")
        if fttg:
            m.add_constraint(ip, LE, cfg.max_size, f"ip_{u}")
            continue
        # one-hot input-port count selects T_sw
        y = {q: m.add_var(f"y_{u}_{q}", t_sw(tables, q)) for q in range(cfg.max_size + 1)}
        m.add_constraint({j: 1 for j in y.values()}, EQ, 1, f"onehot_{u}")
        row = {j: -float(q) for q, j in y.items()}
        for j, coef in ip.items():
            row[j] = row.get(j, 0.0) + coef
        m.add_constraint(row, EQ, 0, f"ip_{u}")
    return m, a, b, d, x


def synth_link_fault(ccg: CommGraph, switches, cfg: DesignConfig, mode: str = DIRECTED,
                     e_r_bit: float = 1.0, e_l_bit: float | None = None,
                     core_wires: bool = False) -> LinkFaultResult:
    """Optimal attachments, links and K+1 link-disjoint paths for a fixed switch set.

    The directed objective is switch power plus inter-switch link power;
    ``core_wires`` adds the core-to-switch wire energy as well.
    """
    if mode not in (DIRECTED, FTTG):
        raise ValueError(f"unknown mode {mode!r}")
    m, a, b, d, x = build_link_model(ccg, switches, cfg, mode, e_r_bit, e_l_bit, core_wires)
    res = solve_ilp(m, backend=cfg.link_ilp_backend, var_cap=200_000)
    sol = res.x
    att_in = {c: u for (c, u), j in a.items() if sol[j]}
    att_out = {c: u for (u, c), j in b.items() if sol[j]}
    paths = []
    used = set()
    for i, f in enumerate(ccg.flows):
        fp = []
        for k in range(cfg.K + 1):
            lk = {(u, v) for (ii, kk, u, v), j in x.items() if ii == i and kk == k and sol[j]}
            p = _bfs(lk, att_in[f.src], att_out[f.dst])
            if p is None:
                raise RuntimeError(f"flow {i} path {k}: no route in the solved link set")
            fp.append(p)
            used |= set(zip(p[:-1], p[1:]))
        paths.append(tuple(fp))
    if mode == FTTG:
        used |= {(v, u) for u, v in used}
    cs = {(c, u, CORE_TO_SWITCH) for c, u in att_in.items()}
    cs |= {(c, u, SWITCH_TO_CORE) for c, u in att_out.items()}
    topo = Topology(tuple(switches), frozenset(cs), frozenset(used))
    return LinkFaultResult(topo, RoutingSet(ccg.flows, tuple(paths)), res.objective, mode)


def synth_link_fault_grow(ccg: CommGraph, cfg: DesignConfig, mode: str = DIRECTED,
                          n_sw: int | None = None, **kw) -> LinkFaultResult:
    """Start from the port-based switch count and add switches until feasible."""
    start = n_sw if n_sw is not None else initial_switches(ccg.n_core, cfg.max_size)
    last = None
    for n in range(start, start + cfg.max_switch_growth + 1):
        try:
            return synth_link_fault(ccg, mapping.place_switches(ccg, n), cfg, mode, **kw)
        except Infeasible as e:
            log.info("link-fault n_sw=%d infeasible: %s", n, e)
            last = e
    raise GrowthExhausted(f"link-fault synthesis infeasible up to {start + cfg.max_switch_growth} switches: {last}")


def energy_fttg(topology: Topology, routing: RoutingSet, e_r_bit: float, e_l_bit: float) -> float:
    """Default-path energy with unit-length links; core links count as links."""
    total = 0.0
    for f, paths in zip(routing.flows, routing.paths):
        links = len(paths[0]) + 1
        total += (links - 1) * e_r_bit * f.bandwidth + links * e_l_bit * f.bandwidth
    return total
