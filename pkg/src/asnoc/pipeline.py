"""End-to-end synthesis: placement, mapping, allocation, sharing and power."""

from __future__ import annotations

import logging

from . import linkfault
from .bundle import Bundle, Project
from .errors import Infeasible
from .model import validate
from .portshare import no_sharing, share_ports
from .power import port_counts, power_report
from .routing import allocate_all

log = logging.getLogger(__name__)

GENERAL = "general"
LINK_ONLY = "link-only"
FTTG = "fttg"
MODES = (GENERAL, LINK_ONLY, FTTG)


class InputError(ValueError):
    """The project does not pass validation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def verify_mode(mode: str) -> str:
    """Fault model a bundle of this synthesis mode is certified against."""
    return "mixed" if mode == GENERAL else "links"


def power_summary(topology, routing, sharing, cfg, unit_distance: bool = False) -> dict:
    shared = power_report(topology, routing, sharing, cfg, unit_distance)
    plain = power_report(topology, routing, no_sharing(topology), cfg, unit_distance)
    ips, ops = port_counts(topology, sharing)
    return {
        "with_sharing": shared,
        "without_sharing": plain,
        "switches_used": sum(1 for i, o in zip(ips, ops) if i or o),
        "links": len(topology.ss_links),
    }


def synthesize(project: Project, mode: str = GENERAL, K: int | None = None,
               sharing: bool = True, seed: int = 0) -> Bundle:
    """Run the full flow for one project.

    Raises ``InputError`` on invalid input and ``GrowthExhausted`` (or
    ``Infeasible`` for a fixed placement) when no design exists.
    """
    if mode not in MODES:
        raise InputError([f"unknown mode {mode!r}"])
    cfg = project.cfg if K is None else project.cfg.with_(K=K)
    problems = validate(project.ccg, cfg)
    if problems:
        raise InputError(problems)
    ccg = project.ccg
    if mode == GENERAL:
        topo, routing = allocate_all(ccg, cfg, project.switches)
        plan = share_ports(topo, routing, cfg.K) if sharing else no_sharing(topo)
        power = power_summary(topo, routing, plan, cfg)
    else:
        lf_mode = linkfault.DIRECTED if mode == LINK_ONLY else linkfault.FTTG
        if project.switches:
            res = linkfault.synth_link_fault(ccg, project.switches, cfg, lf_mode)
        else:
            res = linkfault.synth_link_fault_grow(ccg, cfg, lf_mode)
        topo, routing = res.topology, res.routing
        plan = no_sharing(topo)
        power = power_summary(topo, routing, plan, cfg, unit_distance=mode == FTTG)
        power["objective"] = res.objective
        if mode == FTTG:
            power["energy_fttg"] = linkfault.energy_fttg(topo, routing, 1.0, cfg.e_bit)
    power["sharing_enabled"] = bool(sharing and mode == GENERAL)
    log.info("synthesized %s mode=%s K=%d: %d switches, %d links", project.name, mode, cfg.K,
             power["switches_used"], power["links"])
    return Bundle(project, mode, cfg.K, seed, topo, routing, plan, power)


__all__ = ["GENERAL", "LINK_ONLY", "FTTG", "MODES", "InputError", "Infeasible", "synthesize",
           "power_summary", "verify_mode"]
