"""Fault-tolerant application-specific NoC topology synthesis."""

from .errors import (AsnocError, GrowthExhausted, Infeasible, UnknownSize,
                     Unroutable, VariableCapExceeded)
from .model import (CommGraph, Core, DesignConfig, Flow, RoutingSet, SharingPlan,
                    Switch, Topology, validate)

__version__ = "0.1.0"

__all__ = [
    "AsnocError", "CommGraph", "Core", "DesignConfig", "Flow", "GrowthExhausted",
    "Infeasible", "RoutingSet", "SharingPlan", "Switch", "Topology", "UnknownSize",
    "Unroutable", "VariableCapExceeded", "validate",
]
