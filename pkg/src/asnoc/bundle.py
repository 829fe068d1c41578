"""Project files and output bundles.

All files are JSON written with sorted keys and a fixed indent so that equal
designs give byte-identical bundles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import CommGraph, DesignConfig, RoutingSet, SharingPlan, Switch, Topology

SCHEMA = 1
FIXTURE_PREFIX = "fixture:"

TOPOLOGY = "topology.json"
ROUTING = "routing.json"
SHARING = "sharing.json"
POWER = "power.json"
PROJECT = "project.json"
VERIFY = "verify_report.json"


@dataclass(frozen=True)
class Project:
    name: str
    ccg: CommGraph
    cfg: DesignConfig
    switches: tuple | None = None
    raw: dict | None = None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path: Path) -> dict:
    return json.loads(Path(path).read_text())


def fixture_names() -> list[str]:
    root = resources.files("asnoc").joinpath("data/fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_fixture(name: str) -> dict:
    root = resources.files("asnoc").joinpath("data/fixtures")
    f = root.joinpath(f"{name}.json")
    if not f.is_file():
        raise FileNotFoundError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return json.loads(f.read_text())


def synthesis_fixtures() -> list[str]:
    """Fixtures meant as synthesis inputs; reference designs carry a pinned ``design``."""
    return [n for n in fixture_names() if "design" not in read_fixture(n)]


def parse_project(data: dict, name: str = "project") -> Project:
    ccg = CommGraph.from_dict(data["comm_graph"])
    cfg = DesignConfig.from_dict(data.get("config", {}))
    sw = data.get("switches")
    switches = tuple(Switch.from_dict(s) for s in sw) if sw else None
    return Project(data.get("name", name), ccg, cfg, switches, data)


def load_project(spec: str) -> Project:
    """Read a project from a path or from ``fixture:NAME``."""
    if spec.startswith(FIXTURE_PREFIX):
        name = spec[len(FIXTURE_PREFIX):]
        return parse_project(read_fixture(name), name)
    path = Path(spec)
    return parse_project(read_json(path), path.stem)


def project_dict(p: Project) -> dict:
    d = {"schema": SCHEMA, "name": p.name, "comm_graph": p.ccg.to_dict(), "config": p.cfg.to_dict()}
    if p.switches:
        d["switches"] = [s.to_dict() for s in p.switches]
    if p.raw and "provenance" in p.raw:
        d["provenance"] = p.raw["provenance"]
    return d


@dataclass(frozen=True)
class Bundle:
    project: Project
    mode: str
    K: int
    seed: int
    topology: Topology
    routing: RoutingSet
    sharing: SharingPlan
    power: dict


def write_bundle(out: Path, b: Bundle) -> None:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {"schema": SCHEMA, "mode": b.mode, "K": b.K, "seed": b.seed}
    write_json(out / PROJECT, project_dict(b.project))
    write_json(out / TOPOLOGY, {**meta, "topology": b.topology.to_dict()})
    write_json(out / ROUTING, {**meta, "routing": b.routing.to_dict()})
    write_json(out / SHARING, {**meta, "sharing": b.sharing.to_dict()})
    write_json(out / POWER, {**meta, **b.power})


def read_bundle(path: Path) -> Bundle:
    path = Path(path)
    for name in (PROJECT, TOPOLOGY, ROUTING, SHARING, POWER):
        if not (path / name).is_file():
            raise FileNotFoundError(f"bundle {path} is missing {name}")
    topo = read_json(path / TOPOLOGY)
    routing = read_json(path / ROUTING)
    sharing = read_json(path / SHARING)
    power = read_json(path / POWER)
    project = parse_project(read_json(path / PROJECT))
    return Bundle(project, topo["mode"], int(topo["K"]), int(topo.get("seed", 0)),
                  Topology.from_dict(topo["topology"]), RoutingSet.from_dict(routing["routing"]),
                  SharingPlan.from_dict(sharing["sharing"]),
                  {k: v for k, v in power.items() if k not in ("schema", "mode", "K", "seed")})
