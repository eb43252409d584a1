"""Accuracy-maximizing offloading of inference jobs between an edge device and an edge server."""

from .amdp import run_amdp, run_amdp_hetero
from .amr2 import run_amr2, solve_sub_ilp
from .baseline import greedy_rra
from .model import Instance, Metrics, Schedule, SolveReport, evaluate, validate
from .oracle import exact_ilp

__all__ = [
    "Instance", "Metrics", "Schedule", "SolveReport", "evaluate", "validate",
    "run_amr2", "solve_sub_ilp", "run_amdp", "run_amdp_hetero", "greedy_rra", "exact_ilp",
]
