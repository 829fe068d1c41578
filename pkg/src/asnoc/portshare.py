"""Core port sharing on switches and conflict-free path selection.

A *port* is ``(kind, switch, core)`` with kind ``"in"`` (``core`` feeds the
switch) or ``"out"`` (the switch feeds ``core``). A flow uses an inport with
the path that starts on that switch and an outport with the path that ends
there; switch-disjointness means at most one path per flow per port.

Two ports on one switch may merge when every pair of flows through them has
an intersection matching below K. Merge groups are built per switch by clique
partitioning; cross-switch conflicts are then removed by checking, for every
K-switch fault, that an independent set of the path-conflict graph still
routes every flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import Unroutable
from .model import RoutingSet, SharingPlan, Topology, path_links
from .optim.graphs import max_bipartite_matching, max_clique, max_independent_set, max_matching

IN, OUT = "in", "out"


def flows_through(routing: RoutingSet, kind: str, switch: int, core: int) -> list[tuple[int, int]]:
    """``(flow, path index)`` pairs using the given port."""
    out = []
    for i, (f, paths) in enumerate(zip(routing.flows, routing.paths)):
        if kind == IN and f.src != core or kind == OUT and f.dst != core:
            continue
        for k, p in enumerate(paths):
            if (p[0] if kind == IN else p[-1]) == switch:
                out.append((i, k))
    return out


def port_map(routing: RoutingSet) -> dict:
    """Path vertex ``(flow, k)`` to its ``(inport, outport)``."""
    res = {}
    for i, (f, paths) in enumerate(zip(routing.flows, routing.paths)):
        for k, p in enumerate(paths):
            res[i, k] = ((IN, p[0], f.src), (OUT, p[-1], f.dst))
    return res


def intersection_matching(f1_paths, f2_paths, ip1_path_idx: int, ip2_path_idx: int) -> int:
    """Maximum matching of the bipartite path-intersection graph.

    Left vertices are the paths of the first flow other than the one through
    its port, right vertices likewise for the second. An edge joins two paths
    sharing a switch; the end cores are never counted.
    """
    left = [k for k in range(len(f1_paths)) if k != ip1_path_idx]
    right = [k for k in range(len(f2_paths)) if k != ip2_path_idx]
    edges = [(a, b) for a in left for b in right if set(f1_paths[a]) & set(f2_paths[b])]
    size, _ = max_bipartite_matching(left, right, edges)
    return size


def can_share(ip1: tuple, ip2: tuple, routing: RoutingSet, K: int) -> bool:
    """Whether two same-kind ports of one switch can merge; ports are ``(kind, switch, core)``."""
    if ip1[0] != ip2[0] or ip1[1] != ip2[1]:
        raise ValueError("ports must be of the same kind and on the same switch")
    if ip1 == ip2:
        raise ValueError("a port cannot merge with itself")
    for f1, k1 in flows_through(routing, *ip1):
        for f2, k2 in flows_through(routing, *ip2):
            if f1 == f2:
                return False
            if intersection_matching(routing.paths[f1], routing.paths[f2], k1, k2) >= K:
                return False
    return True


def sharing_graph(topology: Topology, routing: RoutingSet, K: int, kind: str, switch: int):
    """Vertices (cores owning a port of ``kind`` on ``switch``) and sharable pairs."""
    cores = topology.core_inports(switch) if kind == IN else topology.core_outports(switch)
    edges = [(a, b) for a, b in combinations(cores, 2)
             if can_share((kind, switch, a), (kind, switch, b), routing, K)]
    return cores, edges


def partition_switch_ports(vertices, edges, clique_phase: bool = True) -> list[tuple]:
    """Split ports into merge groups.

    Maximum cliques larger than two are peeled off first; a maximum matching
    then pairs what is left, and the rest stay single. With
    ``clique_phase=False`` only the matching step runs.
    """
    remaining = sorted(set(vertices))
    es = {frozenset(e) for e in edges if e[0] != e[1]}
    groups = []
    while clique_phase and remaining:
        sub = [tuple(e) for e in es if e <= set(remaining)]
        q = max_clique(remaining, sub)
        if len(q) <= 2:
            break
        groups.append(tuple(q))
        remaining = [v for v in remaining if v not in q]
    sub = [tuple(sorted(e)) for e in es if e <= set(remaining)]
    pairs = max_matching(remaining, sub)
    matched = set()
    for a, b in pairs:
        groups.append(tuple(sorted((a, b))))
        matched |= {a, b}
    groups += [(v,) for v in remaining if v not in matched]
    return sorted(groups)


@dataclass(frozen=True)
class ConflictGraph:
    """Path vertices ``(flow, k)``; ``kinds`` tags each edge ``"A"`` or ``"B"``."""

    n_flows: int
    paths: dict
    edges: tuple
    kinds: dict

    @property
    def vertices(self) -> list:
        return sorted(self.paths)


def _group_index(sharing: SharingPlan) -> dict:
    """Port to merge-group id, for ports that share with at least one other."""
    idx = {}
    for kind in (IN, OUT):
        for s, groups in sharing.groups(kind).items():
            for g in groups:
                if len(g) > 1:
                    for c in g:
                        idx[kind, s, c] = (kind, s, g)
    return idx


def build_conflict_graph(routing: RoutingSet, sharing: SharingPlan | None) -> ConflictGraph:
    ports = port_map(routing)
    verts = sorted(ports)
    paths = {v: routing.paths[v[0]][v[1]] for v in verts}
    kinds = {}
    for i in range(len(routing.flows)):
        for k1, k2 in combinations(range(len(routing.paths[i])), 2):
            kinds[(i, k1), (i, k2)] = "A"
    if sharing is not None:
        gidx = _group_index(sharing)
        for a, b in combinations(verts, 2):
            if a[0] == b[0]:
                continue
            for pa, pb in zip(ports[a], ports[b]):
                if pa != pb and pa in gidx and gidx.get(pb) == gidx[pa]:
                    kinds[a, b] = "B"
                    break
    edges = tuple(sorted(kinds))
    return ConflictGraph(len(routing.flows), paths, edges, kinds)


def path_hit(path, faults) -> bool:
    fs = getattr(faults, "failed_switches", ())
    fl = getattr(faults, "failed_links", ())
    if any(s in fs for s in path):
        return True
    return any(e in fl for e in path_links(path))


def _select(gpc: ConflictGraph, faults) -> dict:
    alive = [v for v in gpc.vertices if faults is None or not path_hit(gpc.paths[v], faults)]
    aset = set(alive)
    edges = [e for e in gpc.edges if e[0] in aset and e[1] in aset]
    ind = max_independent_set(alive, edges, stop_at=gpc.n_flows)
    return {f: k for f, k in ind}


def select_paths(gpc: ConflictGraph, faults=None) -> dict:
    """One usable, mutually conflict-free path index per flow.

    Raises ``Unroutable`` naming the flows left without a path.
    """
    chosen = _select(gpc, faults)
    if len(chosen) < gpc.n_flows:
        raise Unroutable([f for f in range(gpc.n_flows) if f not in chosen])
    return chosen


def _plan(groups_in: dict, groups_out: dict, gpc_edges=(), removed=()) -> SharingPlan:
    return SharingPlan(dict(groups_in), dict(groups_out), tuple(gpc_edges), tuple(removed))


def share_ports(topology: Topology, routing: RoutingSet, K: int, clique_phase: bool = True,
                resolve: bool = True) -> SharingPlan:
    """Per-switch sharing followed, when ``resolve``, by cross-switch conflict removal."""
    allowed = {}
    groups = {IN: {}, OUT: {}}
    for s in range(topology.n_sw):
        for kind in (IN, OUT):
            cores, edges = sharing_graph(topology, routing, K, kind, s)
            if not cores:
                continue
            allowed[kind, s] = {frozenset(e) for e in edges}
            groups[kind][s] = partition_switch_ports(cores, edges, clique_phase)
    plan = _plan(groups[IN], groups[OUT])
    if resolve:
        plan = resolve_multi_switch_conflicts(routing, plan, K, topology.n_sw, allowed, clique_phase)
    gpc = build_conflict_graph(routing, plan)
    return SharingPlan(plan.inport_groups, plan.outport_groups,
                       tuple(e for e in gpc.edges if gpc.kinds[e] == "B"), plan.removed_sharing_edges)


def no_sharing(topology: Topology) -> SharingPlan:
    gin = {s: [(c,) for c in topology.core_inports(s)] for s in range(topology.n_sw) if topology.core_inports(s)}
    gout = {s: [(c,) for c in topology.core_outports(s)] for s in range(topology.n_sw) if topology.core_outports(s)}
    return SharingPlan(gin, gout)


def _sharing_edges_for(gpc: ConflictGraph, routing: RoutingSet, plan: SharingPlan, flow: int,
                       alive: set) -> list[tuple]:
    """Merge-group edges touching the surviving paths of ``flow``."""
    ports = port_map(routing)
    cands = set()
    for (f, k) in alive:
        if f != flow:
            continue
        for kind, s, c in ports[f, k]:
            for g in plan.groups(kind).get(s, ()):
                if c in g and len(g) > 1:
                    for other in g:
                        if other != c:
                            cands.add((kind, s, tuple(sorted((c, other)))))
    # outport edges go first, inport sharing is worth more
    return sorted(cands, key=lambda e: (e[0] != OUT, e[1], e[2]))


def resolve_multi_switch_conflicts(routing: RoutingSet, plan: SharingPlan, K: int, n_sw: int,
                                   allowed: dict | None = None, clique_phase: bool = True) -> SharingPlan:
    """Drop sharing edges until every K-switch fault leaves a full path selection.

    ``allowed`` holds the sharable pairs per ``(kind, switch)``; a removed
    pair is deleted from it and the affected group is re-partitioned on the
    pairs that remain.
    """
    groups = {IN: {s: list(g) for s, g in plan.inport_groups.items()},
              OUT: {s: list(g) for s, g in plan.outport_groups.items()}}
    if allowed is None:
        allowed = {}
        for kind in (IN, OUT):
            for s, gs in groups[kind].items():
                allowed[kind, s] = {frozenset(p) for g in gs for p in combinations(g, 2)}
    else:
        allowed = {k: set(v) for k, v in allowed.items()}
    removed = list(plan.removed_sharing_edges)
    n_flows = len(routing.flows)
    if K == 0 or n_flows == 0:
        return plan

    def current():
        return _plan(groups[IN], groups[OUT], (), removed)

    for vf in combinations(range(n_sw), K):
        fault = _Switches(frozenset(vf))
        while True:
            cur = current()
            gpc = build_conflict_graph(routing, cur)
            chosen = _select(gpc, fault)
            if len(chosen) == n_flows:
                break
            flow = min(f for f in range(n_flows) if f not in chosen)
            alive = {v for v in gpc.vertices if not path_hit(gpc.paths[v], fault)}
            cands = _sharing_edges_for(gpc, routing, cur, flow, alive)
            if not cands:
                raise RuntimeError(f"flow {flow} starved under {vf} without any sharing edge")
            kind, s, pair = cands[0]
            allowed[kind, s].discard(frozenset(pair))
            grp = next(g for g in groups[kind][s] if pair[0] in g)
            rest = [g for g in groups[kind][s] if g is not grp]
            sub = [tuple(sorted(e)) for e in allowed[kind, s] if e <= set(grp)]
            groups[kind][s] = sorted(rest + partition_switch_ports(grp, sub, clique_phase))
            removed.append({"kind": kind, "switch": s, "ports": list(pair),
                            "fault_set": list(vf), "flow": flow})
    return current()


@dataclass(frozen=True)
class _Switches:
    failed_switches: frozenset
    failed_links: frozenset = frozenset()
