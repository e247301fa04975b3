"""Experiment configs, runners and the command line."""
from .config import CheckRecord, ExperimentConfig, ExperimentReport, resolve_graph
from .experiments import (
    run,
    run_diameter,
    run_foster_suite,
    run_local_limit,
    run_tail_suite,
    run_verify_core,
)

__all__ = [
    "CheckRecord",
    "ExperimentConfig",
    "ExperimentReport",
    "resolve_graph",
    "run",
    "run_diameter",
    "run_foster_suite",
    "run_local_limit",
    "run_tail_suite",
    "run_verify_core",
]
