"""Successive-shortest-path min-cost flow on small integral networks."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import Infeasible

_EPS = 1e-12


@dataclass
class FlowNetwork:
    """Arcs are ``(tail, head, capacity, unit_cost)`` over nodes ``0..n_nodes-1``."""

    n_nodes: int
    source: int
    sink: int
    demand: int
    arcs: list = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: int, cost: float) -> int:
        if capacity < 0:
            raise ValueError("arc capacity must be >= 0")
        if tail == self.sink or head == self.source:
            raise ValueError("arcs may not leave the sink or enter the source")
        self.arcs.append((tail, head, int(capacity), float(cost)))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class FlowResult:
    flow: tuple
    cost: float


def add_convex_arc(net: FlowNetwork, tail: int, head: int, capacity: int, marginal) -> list[int]:
    """Expand a convex-cost arc into unit arcs; ``marginal(x)`` prices the x-th unit."""
    return [net.add_arc(tail, head, 1, marginal(x)) for x in range(1, capacity + 1)]


def min_cost_flow(net: FlowNetwork) -> FlowResult:
    """Send ``net.demand`` units from source to sink at minimum cost.

    Shortest paths come from Bellman-Ford over residual arcs scanned in index
    order with strict improvement, so ties resolve to the lowest arc index.
    """
    m = len(net.arcs)
    # residual arc 2i is forward, 2i+1 backward
    tails = [0] * (2 * m)
    heads = [0] * (2 * m)
    cost = [0.0] * (2 * m)
    for i, (t, h, _cap, c) in enumerate(net.arcs):
        tails[2 * i], heads[2 * i], cost[2 * i] = t, h, c
        tails[2 * i + 1], heads[2 * i + 1], cost[2 * i + 1] = h, t, -c
    flow = [0] * m

    def residual(r: int) -> int:
        i = r >> 1
        return net.arcs[i][2] - flow[i] if r % 2 == 0 else flow[i]

    sent = 0
    inf = float("inf")
    while sent < net.demand:
        dist = [inf] * net.n_nodes
        pred = [-1] * net.n_nodes
        dist[net.source] = 0.0
        for _ in range(net.n_nodes - 1):
            changed = False
            for r in range(2 * m):
                u = tails[r]
                if dist[u] == inf or residual(r) <= 0:
                    continue
                nd = dist[u] + cost[r]
                if nd < dist[heads[r]] - _EPS:
                    dist[heads[r]] = nd
                    pred[heads[r]] = r
                    changed = True
            if not changed:
                break
        if dist[net.sink] == inf:
            raise Infeasible(f"max flow {sent} below required {net.demand}")
        push = net.demand - sent
        v = net.sink
        while v != net.source:
            r = pred[v]
            push = min(push, residual(r))
            v = tails[r]
        v = net.sink
        while v != net.source:
            r = pred[v]
            if r % 2 == 0:
                flow[r >> 1] += push
            else:
                flow[r >> 1] -= push
            v = tails[r]
        sent += push
    total = sum(f * a[3] for f, a in zip(flow, net.arcs))
    return FlowResult(tuple(flow), total)
