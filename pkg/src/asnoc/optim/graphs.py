"""Exact combinatorial kernels for small graphs.

Vertices may be any sortable hashables; results are deterministic and, where
several optima exist, lexicographically smallest in sorted vertex order.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Hashable, Iterable, Sequence


def max_bipartite_matching(left: Sequence, right: Sequence, edges: Iterable) -> tuple[int, list]:
    """Augmenting-path (Kuhn) maximum matching; returns ``(size, pairs)``."""
    left = sorted(left)
    right_set = set(right)
    adj: dict = {u: [] for u in left}
    for u, v in edges:
        if u in adj and v in right_set and v not in adj[u]:
            adj[u].append(v)
    for u in adj:
        adj[u].sort()
    match_r: dict = {}

    def augment(u, seen) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in left:
        augment(u, set())
    pairs = sorted((u, v) for v, u in match_r.items())
    return len(pairs), pairs


def max_matching(vertices: Sequence, edges: Iterable) -> list[tuple]:
    """Maximum-cardinality matching of a general (non-bipartite) small graph.

    Exact subset recursion; intended for per-switch port graphs with a few
    dozen vertices at most.
    """
    verts = sorted(set(vertices))
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    if n > 40:
        raise ValueError("max_matching is exact and limited to 40 vertices")
    nbr = [0] * n
    for a, b in edges:
        if a == b:
            continue
        i, j = index[a], index[b]
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple]:
        if mask == 0:
            return 0, ()
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        top = best(rest)
        cand = nbr[low] & rest
        while cand:
            j = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            size, pairs = best(rest & ~(1 << j))
            if size + 1 > top[0]:
                top = (size + 1, ((low, j),) + pairs)
        return top

    _, pairs = best((1 << n) - 1)
    return [(verts[i], verts[j]) for i, j in pairs]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _color_bound(P: int, adj: list[int]) -> int:
    """Greedy colouring of candidate set ``P``: an upper bound on its clique number."""
    colors = 0
    U = P
    while U:
        colors += 1
        Q = U
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= ~(1 << v)
            Q &= ~adj[v]
            U &= ~(1 << v)
    return colors


def _clique_bits(n: int, adj: list[int], stop_at: int | None = None) -> int:
    best = [0, 0]  # size, mask

    def expand(R: int, size: int, P: int) -> bool:
        if size > best[0]:
            best[0], best[1] = size, R
            if stop_at is not None and size >= stop_at:
                return True
        while P:
            if size + _popcount(P) <= best[0] or size + _color_bound(P, adj) <= best[0]:
                return False
            v = (P & -P).bit_length() - 1
            if expand(R | (1 << v), size + 1, P & adj[v]):
                return True
            P &= ~(1 << v)
        return False

    expand(0, 0, (1 << n) - 1)
    return best[1]


def _as_bits(vertices, edges):
    verts = sorted(set(vertices))
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for a, b in edges:
        if a == b:
            continue
        i, j = index[a], index[b]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return verts, adj


def _unbits(verts, mask):
    return [v for i, v in enumerate(verts) if mask >> i & 1]


def max_clique(vertices: Sequence[Hashable], edges: Iterable) -> list:
    """Maximum clique, lexicographically smallest among ties."""
    verts, adj = _as_bits(vertices, edges)
    if not verts:
        return []
    return _unbits(verts, _clique_bits(len(verts), adj))


def max_independent_set(vertices: Sequence[Hashable], edges: Iterable,
                        stop_at: int | None = None) -> list:
    """Maximum independent set via a maximum clique of the complement.

    ``stop_at`` ends the search once a set of that size is found; pass a known
    upper bound to keep the result exact.
    """
    verts, adj = _as_bits(vertices, edges)
    n = len(verts)
    if not n:
        return []
    full = (1 << n) - 1
    comp = [full & ~adj[i] & ~(1 << i) for i in range(n)]
    return _unbits(verts, _clique_bits(n, comp, stop_at))


def complement_edges(vertices: Sequence, edges: Iterable) -> list[tuple]:
    verts = sorted(set(vertices))
    es = {frozenset(e) for e in edges if e[0] != e[1]}
    return [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:] if frozenset((a, b)) not in es]
