"""Experiment runner: config files, Monte Carlo replicas, CSV/JSON output and the CLI."""
from redsbo.harness.config import ExperimentConfig, load_config, parse_config
from redsbo.harness.runner import (
    aggregate,
    cumulative_regret,
    emit_plot_data,
    run_experiment,
    write_trace_csv,
)

__all__ = [
    "ExperimentConfig",
    "aggregate",
    "cumulative_regret",
    "emit_plot_data",
    "load_config",
    "parse_config",
    "run_experiment",
    "write_trace_csv",
]
