"""Simulated data and the Monte Carlo harness."""
from .generators import gen_gaussian_mean, gen_gaussian_mixture, gen_hidim_linear, gen_sequence_obs
from .harness import (
    ResultRow,
    estimate_risk,
    format_results,
    power_law_sequence,
    read_results,
    run_experiment,
    select_by_validation,
    validation_loss,
    write_results,
)
from .rng import stream

__all__ = [
    "ResultRow",
    "estimate_risk",
    "format_results",
    "gen_gaussian_mean",
    "gen_gaussian_mixture",
    "gen_hidim_linear",
    "gen_sequence_obs",
    "power_law_sequence",
    "read_results",
    "run_experiment",
    "select_by_validation",
    "stream",
    "validation_loss",
    "write_results",
]
