"""Brute-force reference implementations, kept independent of the package code."""

from __future__ import annotations

from itertools import combinations, product

from asnoc.model import manhattan


def brute_ilp(model):
    """Optimal objective of a binary model, or None when infeasible."""
    best = None
    for bits in product((0, 1), repeat=model.n_vars):
        if model.is_feasible(bits):
            v = model.evaluate(bits)
            if best is None or v < best:
                best = v
    return best


def _adj(vertices, edges):
    adj = {v: set() for v in vertices}
    for a, b in edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    return adj


def brute_max_clique(vertices, edges) -> int:
    adj = _adj(vertices, edges)
    vs = list(vertices)
    for r in range(len(vs), 0, -1):
        for sub in combinations(vs, r):
            if all(b in adj[a] for a, b in combinations(sub, 2)):
                return r
    return 0


def brute_mis(vertices, edges) -> int:
    adj = _adj(vertices, edges)
    vs = list(vertices)
    for r in range(len(vs), 0, -1):
        for sub in combinations(vs, r):
            if not any(b in adj[a] for a, b in combinations(sub, 2)):
                return r
    return 0


def brute_matching(edges) -> int:
    """Maximum matching size: the lowest free vertex stays single or pairs with a neighbour."""
    es = {frozenset(e) for e in edges if e[0] != e[1]}
    verts = sorted({v for e in es for v in e})

    def rec(free):
        if not free:
            return 0
        v, rest = free[0], free[1:]
        best = rec(rest)
        for u in rest:
            if frozenset((u, v)) in es:
                best = max(best, 1 + rec(tuple(w for w in rest if w != u)))
        return best

    return rec(tuple(verts))


def brute_min_cost_flow(n_nodes, source, sink, demand, arcs):
    """Cheapest integral flow of ``demand`` units; arcs are ``(tail, head, cap, cost)``."""
    best = None
    for flows in product(*[range(cap + 1) for _, _, cap, _ in arcs]):
        bal = [0] * n_nodes
        for (u, v, _, _), x in zip(arcs, flows):
            bal[u] -= x
            bal[v] += x
        want = [0] * n_nodes
        want[source], want[sink] = -demand, demand
        if bal != want:
            continue
        cost = sum(x * c for (_, _, _, c), x in zip(arcs, flows))
        if best is None or cost < best:
            best = cost
    return best


def brute_mapping(ccg, switches, cfg, direction: str):
    """Minimum of wire cost plus 10x^2 load cost over all feasible attachments."""
    if direction == "source":
        bw = [ccg.out_bandwidth(c) for c in range(ccg.n_core)]
    else:
        bw = [ccg.in_bandwidth(c) for c in range(ccg.n_core)]
    active = [c for c in range(ccg.n_core) if bw[c] > 0]
    n = len(switches)
    ncs = ccg.n_core * (cfg.K + 1) // n + 1
    subsets = list(combinations(range(n), cfg.K + 1))
    best = None
    for choice in product(subsets, repeat=len(active)):
        load = [0] * n
        wire = 0.0
        for c, ss in zip(active, choice):
            for s in ss:
                load[s] += 1
                wire += cfg.e_bit * manhattan(ccg.cores[c].pos, switches[s].pos) * bw[c]
        if max(load) > ncs:
            continue
        cost = wire + sum(10 * x * x for x in load)
        if best is None or cost < best:
            best = cost
    return best


def simple_paths(starts, ends, links, max_len):
    """Switch sequences from a start to an end over ``links``, at most ``max_len`` switches."""
    nbrs = {}
    for u, v in links:
        nbrs.setdefault(u, []).append(v)
    ends = set(ends)
    out = []

    def walk(path):
        if path[-1] in ends:
            out.append(tuple(path))
        if len(path) == max_len:
            return
        for v in nbrs.get(path[-1], ()):
            if v not in path:
                walk(path + [v])

    for s in starts:
        walk([s])
    return out


def brute_flow_paths(f, g, cost_of, K: int):
    """Cheapest ordered K+1 switch-disjoint paths on a split graph.

    ``cost_of(k, u, v)`` is the cost of path ``k`` using link ``u -> v``.
    Returns None when no such path set exists.
    """
    srcs = sorted(u for c, u in g.cs if c == f.src)
    sinks = sorted(u for u, c in g.sc if c == f.dst)
    paths = simple_paths(srcs, sinks, sorted(g.link), f.latency_limit)
    paths = [p for p in paths if all(u in g.split for u in p)]
    best = None

    def rec(k, used, acc):
        nonlocal best
        if k == K + 1:
            if best is None or acc < best:
                best = acc
            return
        for p in paths:
            if used.isdisjoint(p):
                c = sum(cost_of(k, u, v) for u, v in zip(p[:-1], p[1:]))
                rec(k + 1, used | set(p), acc + c)

    rec(0, frozenset(), 0.0)
    return best


def brute_link_fault_k1(ccg, switches, cfg, t_sw):
    """Directed link-fault optimum for K <= 1 when bandwidth never binds.

    Enumerates a single switch per core and every directed link subset; each
    flow needs a default path within its hop budget plus, for K=1, a second
    path link-disjoint from it. ``t_sw(ip)`` is the switch power table.
    """
    n = len(switches)
    links = [(u, v) for u in range(n) for v in range(n) if u != v]
    best = None
    for att in product(range(n), repeat=ccg.n_core):
        per = [att.count(u) for u in range(n)]
        if max(per) > cfg.max_size - 1:
            continue
        for mask in range(1 << len(links)):
            D = [e for i, e in enumerate(links) if mask >> i & 1]
            ip = [per[u] + sum(1 for _, v in D if v == u) for u in range(n)]
            op = [per[u] + sum(1 for a, _ in D if a == u) for u in range(n)]
            if max(ip) > cfg.max_size or max(op) > cfg.max_size:
                continue
            total = sum(t_sw(x) for x in ip) + cfg.c_sw * sum(op) + cfg.c_pl * len(D)
            ok = True
            for f in ccg.flows:
                s, t = att[f.src], att[f.dst]
                if s == t:
                    continue
                ps = simple_paths([s], [t], D, n)
                cands = []
                for p0 in ps:
                    if len(p0) - 1 > f.latency_limit - 1:
                        continue
                    l0 = set(zip(p0[:-1], p0[1:]))
                    if cfg.K >= 1 and not any(l0.isdisjoint(zip(p1[:-1], p1[1:])) for p1 in ps):
                        continue
                    cands.append(sum(cfg.e_bit * f.bandwidth * manhattan(switches[u].pos, switches[v].pos)
                                     for u, v in l0))
                if not cands:
                    ok = False
                    break
                total += min(cands)
            if ok and (best is None or total < best):
                best = total
    return best


def flow_survives(paths, failed_switches=(), failed_links=()) -> bool:
    """Direct per-flow check: some path avoids every failed element."""
    fs, fl = set(failed_switches), set(failed_links)
    for p in paths:
        if fs.isdisjoint(p) and fl.isdisjoint(zip(p[:-1], p[1:])):
            return True
    return False
