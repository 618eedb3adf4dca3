"""Monte Carlo experiment harness: configs, trial runner, rates, CLI."""

from __future__ import annotations

from .config import ExperimentConfig, covert_from_dict, covert_to_dict, load_config, save_config
from .rates import covert_rate_bps, frame_duration_s, reference_rates
from .runner import (
    CSV_COLUMNS,
    PointSummary,
    TrialReport,
    run_point,
    run_sweep,
    run_trial,
    wilson_interval,
    write_csv,
)

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "PointSummary",
    "TrialReport",
    "covert_from_dict",
    "covert_rate_bps",
    "covert_to_dict",
    "frame_duration_s",
    "load_config",
    "reference_rates",
    "run_point",
    "run_sweep",
    "run_trial",
    "save_config",
    "wilson_interval",
    "write_csv",
]
