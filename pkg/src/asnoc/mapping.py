"""Switch placement and convex-cost-flow core mapping.

Each communicating core is attached to K+1 distinct switches. The flow network
is ``b -> core -> switch -> t``; the switch-to-sink arcs carry a convex load
cost ``10 x^2`` which keeps the attachments spread across switches.
"""

from __future__ import annotations

import math

from .errors import Infeasible
from .model import CORE_TO_SWITCH, SWITCH_TO_CORE, CommGraph, DesignConfig, Switch, Topology, manhattan
from .optim.mcf import FlowNetwork, add_convex_arc, min_cost_flow

SOURCE_SIDE = "source"
SINK_SIDE = "sink"

LOAD_COST = 10.0
KMEANS_ITERS = 50


def compute_ncs(n_core: int, n_sw: int, K: int) -> int:
    """Per-switch attachment capacity, one above the average load."""
    if n_sw < 1:
        raise ValueError("n_sw must be >= 1")
    return n_core * (K + 1) // n_sw + 1


def load_cost(x: int) -> float:
    return LOAD_COST * x * x


def _core_weights(ccg: CommGraph) -> list[float]:
    w = [0.0] * ccg.n_core
    for f in ccg.flows:
        w[f.src] += f.bandwidth
        w[f.dst] += f.bandwidth
    return w


def _sqdist(a, b) -> float:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def place_switches(ccg: CommGraph, n_sw: int) -> list[Switch]:
    """Bandwidth-weighted k-means over core positions.

    Centers start from farthest-point seeding rooted at the lowest-id core.
    A cluster whose cores carry no traffic falls back to the plain mean; an
    empty cluster keeps its previous center.
    """
    if n_sw < 1:
        raise ValueError("n_sw must be >= 1")
    pts = [c.pos for c in sorted(ccg.cores, key=lambda c: c.id)]
    if not pts:
        return [Switch(i, (0.0, 0.0)) for i in range(n_sw)]
    weights = _core_weights(ccg)

    centers = [pts[0]]
    while len(centers) < n_sw:
        far = max(range(len(pts)), key=lambda i: (min(_sqdist(pts[i], c) for c in centers), -i))
        centers.append(pts[far])

    for _ in range(KMEANS_ITERS):
        members: list[list[int]] = [[] for _ in centers]
        for i, p in enumerate(pts):
            j = min(range(len(centers)), key=lambda j: (_sqdist(p, centers[j]), j))
            members[j].append(i)
        new = []
        for j, idx in enumerate(members):
            if not idx:
                new.append(centers[j])
                continue
            tw = sum(weights[i] for i in idx)
            if tw > 0:
                x = sum(weights[i] * pts[i][0] for i in idx) / tw
                y = sum(weights[i] * pts[i][1] for i in idx) / tw
            else:
                x = sum(pts[i][0] for i in idx) / len(idx)
                y = sum(pts[i][1] for i in idx) / len(idx)
            new.append((x, y))
        if new == centers:
            break
        centers = new
    return [Switch(i, (float(p[0]), float(p[1]))) for i, p in enumerate(centers)]


def _side_bandwidth(ccg: CommGraph, direction: str) -> list[float]:
    if direction == SOURCE_SIDE:
        return [ccg.out_bandwidth(c) for c in range(ccg.n_core)]
    if direction == SINK_SIDE:
        return [ccg.in_bandwidth(c) for c in range(ccg.n_core)]
    raise ValueError(f"unknown direction {direction!r}")


def wire_cost(ccg: CommGraph, switches, cfg: DesignConfig, direction: str, core: int, sw: int) -> float:
    bw = _side_bandwidth(ccg, direction)[core]
    return cfg.e_bit * manhattan(ccg.cores[core].pos, switches[sw].pos) * bw


def map_cores(ccg: CommGraph, switches, cfg: DesignConfig, direction: str) -> frozenset:
    """``(core, switch)`` attachments for one side: K+1 distinct switches per active core."""
    bw = _side_bandwidth(ccg, direction)
    active = [c for c in range(ccg.n_core) if bw[c] > 0]
    n_sw = len(switches)
    need = cfg.K + 1
    if active and need > n_sw:
        raise Infeasible(f"{direction} mapping needs {need} switches per core, only {n_sw}")
    ncs = compute_ncs(ccg.n_core, n_sw, cfg.K)
    n_core = ccg.n_core
    b, t = 0, n_core + n_sw + 1
    net = FlowNetwork(n_core + n_sw + 2, b, t, need * len(active))

    def core_node(c):
        return 1 + c

    def sw_node(s):
        return 1 + n_core + s

    for c in range(n_core):
        net.add_arc(b, core_node(c), need if bw[c] > 0 else 0, 0.0)
    pair_arcs = {}
    for c in active:
        for s in range(n_sw):
            cost = cfg.e_bit * manhattan(ccg.cores[c].pos, switches[s].pos) * bw[c]
            pair_arcs[(c, s)] = net.add_arc(core_node(c), sw_node(s), 1, cost)
    for s in range(n_sw):
        add_convex_arc(net, sw_node(s), t, ncs, lambda x: LOAD_COST * (2 * x - 1))
    res = min_cost_flow(net)
    return frozenset(cs for cs, a in pair_arcs.items() if res.flow[a] > 0)


def mapping_cost(ccg: CommGraph, switches, cfg: DesignConfig, direction: str, links) -> float:
    """Wire cost plus convex load cost of a set of ``(core, switch)`` attachments."""
    bw = _side_bandwidth(ccg, direction)
    load = [0] * len(switches)
    total = 0.0
    for c, s in links:
        total += cfg.e_bit * manhattan(ccg.cores[c].pos, switches[s].pos) * bw[c]
        load[s] += 1
    return total + sum(load_cost(x) for x in load)


def skeleton(switches, src_links, sink_links) -> Topology:
    """Topology with core links only; switch-to-switch links come from routing."""
    cs = {(c, s, CORE_TO_SWITCH) for c, s in src_links}
    cs |= {(c, s, SWITCH_TO_CORE) for c, s in sink_links}
    return Topology(tuple(switches), frozenset(cs), frozenset())


def map_both(ccg: CommGraph, switches, cfg: DesignConfig) -> Topology:
    return skeleton(switches, map_cores(ccg, switches, cfg, SOURCE_SIDE),
                    map_cores(ccg, switches, cfg, SINK_SIDE))


def min_switches(ccg: CommGraph, cfg: DesignConfig) -> int:
    """Lower bound on switch count from attachment and port limits."""
    n_src = len(ccg.sources())
    n_dst = len(ccg.sinks())
    if not ccg.flows:
        return 1
    ports = (cfg.K + 1) * max(n_src, n_dst)
    return max(cfg.K + 1, math.ceil(ports / cfg.max_size))
