"""Fault injection: check that every fault set within budget leaves each flow a path."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import Unroutable
from .model import RoutingSet, SharingPlan, Topology
from .portshare import build_conflict_graph, path_hit, select_paths

SWITCHES, LINKS, MIXED = "switches", "links", "mixed"
DEFAULT_SAMPLE_LIMIT = 200_000


@dataclass(frozen=True)
class FaultSet:
    failed_switches: frozenset = frozenset()
    failed_links: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "failed_switches", frozenset(self.failed_switches))
        object.__setattr__(self, "failed_links", frozenset(tuple(e) for e in self.failed_links))

    @property
    def size(self) -> int:
        return len(self.failed_switches) + len(self.failed_links)

    def to_dict(self) -> dict:
        return {"failed_switches": sorted(self.failed_switches),
                "failed_links": [list(e) for e in sorted(self.failed_links)]}

    @classmethod
    def from_dict(cls, d: dict) -> "FaultSet":
        return cls(frozenset(d.get("failed_switches", [])),
                   frozenset(tuple(e) for e in d.get("failed_links", [])))


def _elements(topology: Topology, mode: str) -> list:
    sw = [("s", s) for s in range(topology.n_sw)]
    lk = [("l", e) for e in sorted(topology.ss_links)]
    if mode == SWITCHES:
        return sw
    if mode == LINKS:
        return lk
    if mode == MIXED:
        return sw + lk
    raise ValueError(f"unknown fault mode {mode!r}")


def _to_fault(items) -> FaultSet:
    return FaultSet(frozenset(v for t, v in items if t == "s"), frozenset(v for t, v in items if t == "l"))


def count_faults(topology: Topology, K: int, mode: str) -> int:
    n = len(_elements(topology, mode))
    return sum(comb(n, r) for r in range(min(K, n) + 1))


def enumerate_faults(topology: Topology, K: int, mode: str = SWITCHES,
                     sample_limit: int = DEFAULT_SAMPLE_LIMIT, seed: int = 0):
    """Fault sets of size 0..K in size-then-lexicographic order.

    Past ``sample_limit`` sets, every set of size at most one is kept and the
    rest is a seeded uniform sample of larger sets.
    """
    elems = _elements(topology, mode)
    n = len(elems)
    kmax = min(K, n)
    if count_faults(topology, K, mode) <= sample_limit:
        for r in range(kmax + 1):
            for items in combinations(elems, r):
                yield _to_fault(items)
        return
    yield FaultSet()
    for e in elems:
        yield _to_fault([e])
    budget = max(0, sample_limit - 1 - n)
    sizes = list(range(2, kmax + 1))
    weights = [comb(n, r) for r in sizes]
    if not sizes or budget == 0:
        return
    rng = random.Random(seed)
    seen = set()
    while len(seen) < budget:
        r = rng.choices(sizes, weights)[0]
        idx = tuple(sorted(rng.sample(range(n), r)))
        if idx in seen:
            continue
        seen.add(idx)
    for idx in sorted(seen, key=lambda t: (len(t), t)):
        yield _to_fault([elems[i] for i in idx])


@dataclass
class VerifyReport:
    K: int
    mode: str
    checked: int = 0
    sampled: bool = False
    seed: int = 0
    failures: list = field(default_factory=list)  # (FaultSet, flows)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "K": self.K,
            "mode": self.mode,
            "checked": self.checked,
            "sampled": self.sampled,
            "seed": self.seed,
            "passed": self.passed,
            "failures": [{**fs.to_dict(), "flows": list(flows)} for fs, flows in self.failures],
        }


def verify(topology: Topology, routing: RoutingSet, sharing: SharingPlan | None, K: int,
           mode: str = MIXED, sample_limit: int = DEFAULT_SAMPLE_LIMIT, seed: int = 0) -> VerifyReport:
    """Run path selection under every fault set; each unroutable outcome is a failure."""
    gpc = build_conflict_graph(routing, sharing)
    rep = VerifyReport(K, mode, seed=seed,
                       sampled=count_faults(topology, K, mode) > sample_limit)
    for fs in enumerate_faults(topology, K, mode, sample_limit, seed):
        rep.checked += 1
        try:
            select_paths(gpc, fs)
        except Unroutable as e:
            rep.failures.append((fs, tuple(e.flows)))
    return rep


def surviving_flows(routing: RoutingSet, fs: FaultSet) -> list[int]:
    """Flows with at least one path untouched by ``fs``; ignores port sharing."""
    return [i for i, paths in enumerate(routing.paths) if any(not path_hit(p, fs) for p in paths)]
