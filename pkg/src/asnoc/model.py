"""Domain types shared by the synthesis pipeline.

Every type is a frozen dataclass with ``to_dict``/``from_dict`` that round-trip
through JSON-compatible structures. Unknown keys are ignored on read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

Pos = tuple[float, float]
Path = tuple[int, ...]

CORE_TO_SWITCH = "cs"
SWITCH_TO_CORE = "sc"


def manhattan(a: Pos, b: Pos) -> float:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


@dataclass(frozen=True)
class Core:
    id: int
    name: str
    pos: Pos

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "pos": [self.pos[0], self.pos[1]]}

    @classmethod
    def from_dict(cls, d: dict) -> "Core":
        return cls(int(d["id"]), str(d.get("name", f"c{d['id']}")),
                   (float(d["pos"][0]), float(d["pos"][1])))


@dataclass(frozen=True)
class Flow:
    src: int
    dst: int
    bandwidth: float
    latency_limit: int

    def to_dict(self) -> dict:
        return {"src": self.src, "dst": self.dst, "bandwidth": self.bandwidth,
                "latency_limit": self.latency_limit}

    @classmethod
    def from_dict(cls, d: dict) -> "Flow":
        return cls(int(d["src"]), int(d["dst"]), float(d["bandwidth"]),
                   int(d["latency_limit"]))


@dataclass(frozen=True)
class CommGraph:
    cores: tuple[Core, ...]
    flows: tuple[Flow, ...]

    def __post_init__(self):
        object.__setattr__(self, "cores", tuple(self.cores))
        object.__setattr__(self, "flows", tuple(self.flows))

    @property
    def n_core(self) -> int:
        return len(self.cores)

    def sources(self) -> list[int]:
        return sorted({f.src for f in self.flows})

    def sinks(self) -> list[int]:
        return sorted({f.dst for f in self.flows})

    def out_bandwidth(self, core: int) -> float:
        return sum(f.bandwidth for f in self.flows if f.src == core)

    def in_bandwidth(self, core: int) -> float:
        return sum(f.bandwidth for f in self.flows if f.dst == core)

    def to_dict(self) -> dict:
        return {"cores": [c.to_dict() for c in self.cores],
                "flows": [f.to_dict() for f in self.flows]}

    @classmethod
    def from_dict(cls, d: dict) -> "CommGraph":
        return cls(tuple(Core.from_dict(c) for c in d["cores"]),
                   tuple(Flow.from_dict(f) for f in d.get("flows", [])))


def _default_tables():
    # imported lazily: power depends on model
    from .power import default_tables
    return default_tables()


@dataclass(frozen=True)
class DesignConfig:
    """Synthesis knobs.

    ``t_sw`` maps an input-port count to switch power (mW), ``c_sw`` is the
    per-output-port power. ``mux_table``/``demux_table`` map a multiplexer
    size to ``(leakage_uW, total_mW)``.
    """

    K: int = 1
    n_sw: int = 4
    bw_max: float = 3000.0
    max_size: int = 10
    e_bit: float = 0.5
    c_pl: float = 0.0
    c_sw: float | None = None
    t_sw: dict | None = None
    mux_table: dict | None = None
    demux_table: dict | None = None
    max_switch_growth: int = 8
    # undecided readings of the per-flow model, see README
    link_cost_all_paths: bool = False
    reserve_alt_bandwidth: bool = False
    ilp_backend: str = "bnb"
    # the joint link-fault models are too large for the dense simplex
    link_ilp_backend: str = "highs"

    def __post_init__(self):
        tables = None
        for name in ("c_sw", "t_sw", "mux_table", "demux_table"):
            if getattr(self, name) is None:
                tables = tables or _default_tables()
                object.__setattr__(self, name, getattr(tables, _TABLE_FIELDS[name]))
        object.__setattr__(self, "t_sw", {int(k): float(v) for k, v in self.t_sw.items()})
        object.__setattr__(self, "c_sw", float(self.c_sw))
        for name in ("mux_table", "demux_table"):
            table = {int(k): (float(v[0]), float(v[1])) for k, v in getattr(self, name).items()}
            object.__setattr__(self, name, table)

    def __hash__(self):
        return hash((self.K, self.n_sw, self.bw_max, self.max_size))

    def with_(self, **changes) -> "DesignConfig":
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(changes)
        return DesignConfig(**d)

    def to_dict(self) -> dict:
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d["t_sw"] = {str(k): v for k, v in sorted(self.t_sw.items())}
        d["mux_table"] = {str(k): list(v) for k, v in sorted(self.mux_table.items())}
        d["demux_table"] = {str(k): list(v) for k, v in sorted(self.demux_table.items())}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DesignConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)


_TABLE_FIELDS = {"c_sw": "c_sw", "t_sw": "t_sw", "mux_table": "mux", "demux_table": "demux"}


@dataclass(frozen=True)
class Switch:
    id: int
    pos: Pos

    def to_dict(self) -> dict:
        return {"id": self.id, "pos": [self.pos[0], self.pos[1]]}

    @classmethod
    def from_dict(cls, d: dict) -> "Switch":
        return cls(int(d["id"]), (float(d["pos"][0]), float(d["pos"][1])))


@dataclass(frozen=True)
class Topology:
    """Switches plus the two link classes.

    ``cs_links`` holds ``(core, switch, direction)`` with direction
    ``"cs"`` (core to switch, a core inport) or ``"sc"`` (a core outport).
    ``ss_links`` holds directed ``(u, v)`` switch pairs.
    """

    switches: tuple[Switch, ...]
    cs_links: frozenset = frozenset()
    ss_links: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "switches", tuple(self.switches))
        object.__setattr__(self, "cs_links", frozenset(self.cs_links))
        object.__setattr__(self, "ss_links", frozenset(self.ss_links))

    @property
    def n_sw(self) -> int:
        return len(self.switches)

    def pos(self, s: int) -> Pos:
        return self.switches[s].pos

    def src_switches(self, core: int) -> list[int]:
        return sorted(s for c, s, d in self.cs_links if c == core and d == CORE_TO_SWITCH)

    def sink_switches(self, core: int) -> list[int]:
        return sorted(s for c, s, d in self.cs_links if c == core and d == SWITCH_TO_CORE)

    def core_inports(self, s: int) -> list[int]:
        """Cores feeding switch ``s``."""
        return sorted(c for c, t, d in self.cs_links if t == s and d == CORE_TO_SWITCH)

    def core_outports(self, s: int) -> list[int]:
        return sorted(c for c, t, d in self.cs_links if t == s and d == SWITCH_TO_CORE)

    def in_ports(self, s: int) -> int:
        return len(self.core_inports(s)) + sum(1 for u, v in self.ss_links if v == s)

    def out_ports(self, s: int) -> int:
        return len(self.core_outports(s)) + sum(1 for u, v in self.ss_links if u == s)

    def to_dict(self) -> dict:
        return {
            "switches": [s.to_dict() for s in self.switches],
            "cs_links": [[c, s, d] for c, s, d in sorted(self.cs_links)],
            "ss_links": [[u, v] for u, v in sorted(self.ss_links)],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Topology":
        return cls(tuple(Switch.from_dict(s) for s in d["switches"]),
                   frozenset((int(c), int(s), str(k)) for c, s, k in d.get("cs_links", [])),
                   frozenset((int(u), int(v)) for u, v in d.get("ss_links", [])))


def path_links(path: Path) -> list[tuple[int, int]]:
    return list(zip(path[:-1], path[1:]))


@dataclass(frozen=True)
class RoutingSet:
    """K+1 routing paths per flow; ``paths[f][0]`` is the default path."""

    flows: tuple[Flow, ...]
    paths: tuple[tuple[Path, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        object.__setattr__(self, "paths", tuple(tuple(tuple(p) for p in ps) for ps in self.paths))

    def to_dict(self) -> dict:
        return {"flows": [f.to_dict() for f in self.flows],
                "paths": [[list(p) for p in ps] for ps in self.paths]}

    @classmethod
    def from_dict(cls, d: dict) -> "RoutingSet":
        return cls(tuple(Flow.from_dict(f) for f in d["flows"]),
                   tuple(tuple(tuple(int(s) for s in p) for p in ps) for ps in d["paths"]))


@dataclass(frozen=True)
class SharingPlan:
    """Merged core ports per switch.

    ``inport_groups[s]`` partitions the cores feeding switch ``s``;
    ``outport_groups[s]`` partitions the cores fed by ``s``.
    ``gpc_edges`` lists conflict edges between path vertices ``(flow, k)``.
    """

    inport_groups: dict = field(default_factory=dict)
    outport_groups: dict = field(default_factory=dict)
    gpc_edges: tuple = ()
    removed_sharing_edges: tuple = ()

    def __post_init__(self):
        for name in ("inport_groups", "outport_groups"):
            groups = {int(s): tuple(tuple(sorted(g)) for g in gs)
                      for s, gs in getattr(self, name).items()}
            object.__setattr__(self, name, groups)
        object.__setattr__(self, "gpc_edges", tuple(tuple(tuple(v) for v in e) for e in self.gpc_edges))
        object.__setattr__(self, "removed_sharing_edges", tuple(self.removed_sharing_edges))

    def __hash__(self):
        return hash((self.gpc_edges, self.removed_sharing_edges))

    def groups(self, kind: str) -> dict:
        return self.inport_groups if kind == "in" else self.outport_groups

    def to_dict(self) -> dict:
        def enc(groups):
            return {str(s): [list(g) for g in gs] for s, gs in sorted(groups.items())}
        return {
            "inport_groups": enc(self.inport_groups),
            "outport_groups": enc(self.outport_groups),
            "gpc_edges": [[list(a), list(b)] for a, b in self.gpc_edges],
            "removed_sharing_edges": [dict(e) for e in self.removed_sharing_edges],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SharingPlan":
        return cls(
            {int(s): gs for s, gs in d.get("inport_groups", {}).items()},
            {int(s): gs for s, gs in d.get("outport_groups", {}).items()},
            tuple((tuple(a), tuple(b)) for a, b in d.get("gpc_edges", [])),
            tuple(d.get("removed_sharing_edges", [])),
        )


def validate(ccg: CommGraph, cfg: DesignConfig) -> list[str]:
    """Return one message per broken invariant; empty when everything holds."""
    out = []
    ids = [c.id for c in ccg.cores]
    if sorted(ids) != list(range(len(ids))):
        out.append("cores: ids must be dense and unique in [0, n_core)")
    for c in ccg.cores:
        x, y = c.pos
        if not (math.isfinite(x) and math.isfinite(y)) or x < 0 or y < 0:
            out.append(f"core {c.id}: coordinates must be finite and non-negative")
    idset = set(ids)
    seen = set()
    for i, f in enumerate(ccg.flows):
        if f.src == f.dst:
            out.append(f"flow {i}: src equals dst")
        if f.src not in idset or f.dst not in idset:
            out.append(f"flow {i}: endpoint references unknown core")
        if not f.bandwidth > 0:
            out.append(f"flow {i}: bandwidth must be positive")
        if f.latency_limit < 1:
            out.append(f"flow {i}: latency_limit must be >= 1")
        if (f.src, f.dst) in seen:
            out.append(f"flow {i}: duplicate flow {f.src}->{f.dst}")
        seen.add((f.src, f.dst))
        if f.bandwidth >= cfg.bw_max:
            out.append(f"flow {i}: bandwidth {f.bandwidth:g} must be below bw_max {cfg.bw_max:g}")
    if cfg.K < 0:
        out.append("config: K must be >= 0")
    if cfg.n_sw < 1:
        out.append("config: n_sw must be >= 1")
    if cfg.max_size < 1:
        out.append("config: max_size must be >= 1")
    for name in ("bw_max", "e_bit", "c_pl", "c_sw"):
        if getattr(cfg, name) < 0:
            out.append(f"config: {name} must be >= 0")
    if cfg.max_switch_growth < 0:
        out.append("config: max_switch_growth must be >= 0")
    missing = [n for n in range(1, cfg.max_size + 1) if n not in cfg.t_sw]
    if missing:
        out.append(f"config: t_sw undefined for input-port counts {missing}")
    if any(v < 0 for v in cfg.t_sw.values()):
        out.append("config: t_sw entries must be >= 0")
    for name in ("mux_table", "demux_table"):
        if any(a < 0 or b < 0 for a, b in getattr(cfg, name).values()):
            out.append(f"config: {name} entries must be >= 0")
    for name in ("ilp_backend", "link_ilp_backend"):
        if getattr(cfg, name) not in ("bnb", "highs"):
            out.append(f"config: unknown {name} {getattr(cfg, name)!r}")
    return out


def flows_by_bandwidth(flows: Iterable[Flow]) -> list[int]:
    """Flow indices in descending bandwidth, ties by index."""
    flows = list(flows)
    return sorted(range(len(flows)), key=lambda i: (-flows[i].bandwidth, i))
