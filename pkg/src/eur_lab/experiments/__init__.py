"""Experiment orchestration: named Monte Carlo suites, a deterministic
parallel runner, CSV/JSON persistence, and plot emission."""

from .config import ExperimentConfig, ExperimentRecord
from .runner import run_experiment, replay_record
from .report import summarize, emit_plots, load_records
from .suites import SUITES

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "run_experiment",
    "replay_record",
    "summarize",
    "emit_plots",
    "load_records",
    "SUITES",
]
