"""Anytime multi-heuristic A* search library."""

from .domain import SearchDomain, StateInterner
from .heap import AddressableHeap
from .planner import (
    Outcome,
    Planner,
    PlannerConfig,
    SolutionRecord,
    run_anytime,
    run_ara,
    run_astar,
    run_mha_oneshot,
    run_wastar,
)
from .verify import Verdict, verify_run

__version__ = "0.1.0"

__all__ = [
    "AddressableHeap",
    "Outcome",
    "Planner",
    "PlannerConfig",
    "SearchDomain",
    "SolutionRecord",
    "StateInterner",
    "Verdict",
    "run_anytime",
    "run_ara",
    "run_astar",
    "run_mha_oneshot",
    "run_wastar",
    "verify_run",
]
