"""Switch, link and MUX/DEMUX power models plus report aggregation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import UnknownSize
from .model import DesignConfig, RoutingSet, SharingPlan, Topology, manhattan, path_links


@dataclass(frozen=True)
class PowerTables:
    t_sw: dict
    c_sw: float
    mux: dict
    demux: dict

    def __hash__(self):
        return hash((tuple(sorted(self.t_sw.items())), self.c_sw))

    @classmethod
    def from_config(cls, cfg: DesignConfig) -> "PowerTables":
        return cls(cfg.t_sw, cfg.c_sw, cfg.mux_table, cfg.demux_table)

    @classmethod
    def from_json(cls, data: dict) -> "PowerTables":
        return cls({int(k): float(v) for k, v in data["t_sw"].items()},
                   float(data["c_sw"]),
                   {int(k): (float(a), float(b)) for k, (a, b) in data["mux"].items()},
                   {int(k): (float(a), float(b)) for k, (a, b) in data["demux"].items()})


@lru_cache(maxsize=1)
def default_tables() -> PowerTables:
    text = resources.files("asnoc").joinpath("data/power_tables.json").read_text()
    return PowerTables.from_json(json.loads(text))


def _lookup(table: dict, n: int, extend: bool = True) -> float:
    """Table value at ``n``; linear between keys, affine past the last key."""
    if n in table:
        return table[n]
    keys = sorted(table)
    if n < keys[0] or (n > keys[-1] and not extend):
        raise UnknownSize(f"size {n} outside table keys {keys[0]}..{keys[-1]}")
    if n > keys[-1]:
        if len(keys) == 1:
            return table[keys[-1]]
        a, b = keys[-2], keys[-1]
    else:
        b = next(k for k in keys if k > n)
        a = max(k for k in keys if k < n)
    slope = (table[b] - table[a]) / (b - a)
    return table[a] + slope * (n - a)


def t_sw(tables: PowerTables, ip: int) -> float:
    if ip <= 0:
        return 0.0
    return _lookup(tables.t_sw, ip)


def switch_power(ip: int, op: int, tables: PowerTables) -> float:
    """Power of one switch with ``ip`` inputs and ``op`` outputs; an unused switch costs 0."""
    if ip == 0 and op == 0:
        return 0.0
    return t_sw(tables, ip) + tables.c_sw * op


def link_power(routing: RoutingSet, topology: Topology, cfg: DesignConfig,
               unit_distance: bool = False) -> float:
    """Opening cost per physical link plus default-path traffic energy."""
    total = cfg.c_pl * len(topology.ss_links)
    for flow, paths in zip(routing.flows, routing.paths):
        for u, v in path_links(paths[0]):
            d = 1.0 if unit_distance else manhattan(topology.pos(u), topology.pos(v))
            total += cfg.e_bit * flow.bandwidth * d
    return total


def _mux_power(table: dict, n: int, extend: bool) -> float:
    if n < 2:
        return 0.0
    return _lookup({k: v[1] for k, v in table.items()}, n, extend)


def interface_power(topology: Topology, sharing: SharingPlan | None, tables: PowerTables,
                    extend: bool = True) -> float:
    """MUX/DEMUX power.

    Each core gets a DEMUX over its inport fan-out and a MUX over its outport
    fan-in. A merged group of J core inports needs a J:1 MUX in front of the
    switch port; a merged group of J outports needs a 1:J DEMUX behind it.
    """
    fan_out: dict[int, int] = {}
    fan_in: dict[int, int] = {}
    for c, _s, d in topology.cs_links:
        if d == "cs":
            fan_out[c] = fan_out.get(c, 0) + 1
        else:
            fan_in[c] = fan_in.get(c, 0) + 1
    total = sum(_mux_power(tables.demux, n, extend) for _, n in sorted(fan_out.items()))
    total += sum(_mux_power(tables.mux, n, extend) for _, n in sorted(fan_in.items()))
    if sharing is not None:
        for _s, groups in sorted(sharing.inport_groups.items()):
            total += sum(_mux_power(tables.mux, len(g), extend) for g in groups)
        for _s, groups in sorted(sharing.outport_groups.items()):
            total += sum(_mux_power(tables.demux, len(g), extend) for g in groups)
    return total


def port_counts(topology: Topology, sharing: SharingPlan | None = None) -> tuple[list[int], list[int]]:
    """Per-switch input/output port counts, after merging when a plan is given."""
    link_in = [0] * topology.n_sw
    link_out = [0] * topology.n_sw
    for u, v in topology.ss_links:
        link_out[u] += 1
        link_in[v] += 1
    ips, ops = [], []
    for s in range(topology.n_sw):
        if sharing is not None and s in sharing.inport_groups:
            cin = len(sharing.inport_groups[s])
        else:
            cin = len(topology.core_inports(s))
        if sharing is not None and s in sharing.outport_groups:
            cout = len(sharing.outport_groups[s])
        else:
            cout = len(topology.core_outports(s))
        ips.append(link_in[s] + cin)
        ops.append(link_out[s] + cout)
    return ips, ops


def power_report(topology: Topology, routing: RoutingSet, sharing: SharingPlan | None,
                 cfg: DesignConfig, unit_distance: bool = False) -> dict:
    tables = PowerTables.from_config(cfg)
    ips, ops = port_counts(topology, sharing)
    per_switch = [switch_power(i, o, tables) for i, o in zip(ips, ops)]
    sw = sum(per_switch)
    lk = link_power(routing, topology, cfg, unit_distance)
    itf = interface_power(topology, sharing, tables)
    return {
        "switch": sw,
        "link": lk,
        "interface": itf,
        "total": sw + lk + itf,
        "per_switch": per_switch,
        "input_ports": sum(ips),
        "output_ports": sum(ops),
    }
