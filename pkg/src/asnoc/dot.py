"""Graphviz DOT rendering of a design.

Views: ``topology`` (cores, switches and physical links), ``routing`` (the
same graph with each inter-switch link labelled by the paths using it) and
``gpc`` (the path-conflict graph). Output is deterministic.
"""

from __future__ import annotations

from .model import RoutingSet, SharingPlan, Topology, path_links
from .portshare import IN, OUT, build_conflict_graph

VIEWS = ("topology", "routing", "gpc")


def _q(s: str) -> str:
    return '"' + s.replace('"', r"\"") + '"'


def _merged(sharing: SharingPlan | None) -> dict:
    """``(kind, switch, core)`` to a group label, for merged ports only."""
    out = {}
    if sharing is None:
        return out
    for kind in (IN, OUT):
        for s, groups in sorted(sharing.groups(kind).items()):
            for gi, g in enumerate(groups):
                if len(g) > 1:
                    for c in g:
                        out[kind, s, c] = f"s{s}.{kind}{gi}"
    return out


def _used_switches(topology: Topology) -> list[int]:
    used = {s for _, s, _ in topology.cs_links}
    for u, v in topology.ss_links:
        used |= {u, v}
    return sorted(used)


def _skeleton(topology: Topology, core_names, sharing, lines: list[str]) -> None:
    for c, name in enumerate(core_names):
        lines.append(f"  c{c} [shape=box, label={_q(name)}];")
    for s in _used_switches(topology):
        lines.append(f"  s{s} [shape=circle, label={_q(f's{s}')}];")
    merged = _merged(sharing)
    for c, s, d in sorted(topology.cs_links):
        kind = IN if d == "cs" else OUT
        tag = merged.get((kind, s, c))
        attr = f" [label={_q('shared ' + tag)}, style=bold]" if tag else ""
        lines.append(f"  c{c} -> s{s}{attr};" if kind == IN else f"  s{s} -> c{c}{attr};")


def topology_dot(topology: Topology, core_names, sharing: SharingPlan | None = None) -> str:
    lines = ["digraph topology {"]
    _skeleton(topology, core_names, sharing, lines)
    for u, v in sorted(topology.ss_links):
        lines.append(f"  s{u} -> s{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def routing_dot(topology: Topology, routing: RoutingSet, core_names,
                sharing: SharingPlan | None = None) -> str:
    users = {}
    for i, paths in enumerate(routing.paths):
        for k, p in enumerate(paths):
            for e in path_links(p):
                users.setdefault(e, []).append(f"f{i}.{k}")
    lines = ["digraph routing {"]
    _skeleton(topology, core_names, sharing, lines)
    for e in sorted(topology.ss_links):
        label = ",".join(users.get(e, []))
        lines.append(f"  s{e[0]} -> s{e[1]} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def gpc_dot(routing: RoutingSet, sharing: SharingPlan | None = None) -> str:
    gpc = build_conflict_graph(routing, sharing)
    lines = ["graph gpc {"]
    for f, k in gpc.vertices:
        path = "-".join(str(s) for s in gpc.paths[f, k])
        lines.append(f"  p{f}_{k} [shape=ellipse, label={_q(f'f{f} p{k}: {path}')}];")
    for a, b in gpc.edges:
        style = "solid" if gpc.kinds[a, b] == "A" else "dashed"
        lines.append(f"  p{a[0]}_{a[1]} -- p{b[0]}_{b[1]} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(view: str, topology: Topology, routing: RoutingSet, sharing: SharingPlan | None, core_names) -> str:
    if view == "topology":
        return topology_dot(topology, core_names, sharing)
    if view == "routing":
        return routing_dot(topology, routing, core_names, sharing)
    if view == "gpc":
        return gpc_dot(routing, sharing)
    raise ValueError(f"unknown view {view!r}; choose from {', '.join(VIEWS)}")
