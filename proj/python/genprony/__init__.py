"""Prony-type recovery of generalized exponential sums."""

import json

from ._core import (
    CapabilityError,
    ConfigError,
    DegenerateError,
    DomainError,
    IllPosedError,
    Model,
    SolverReport,
    add_noise,
    deflate,
    esprit,
    levenberg_marquardt,
    objective,
    operator_weights,
    preset_configs,
    preset_names,
    prony_direct,
    recover_from_derivatives,
    run_config,
    stationarity_residual,
)


def run_preset(name):
    """Runs every configuration of a preset and returns the parsed reports."""
    return [json.loads(run_config(text)) for text in preset_configs(name)]


__all__ = [
    "CapabilityError",
    "ConfigError",
    "DegenerateError",
    "DomainError",
    "IllPosedError",
    "Model",
    "SolverReport",
    "add_noise",
    "deflate",
    "esprit",
    "levenberg_marquardt",
    "objective",
    "operator_weights",
    "preset_configs",
    "preset_names",
    "prony_direct",
    "recover_from_derivatives",
    "run_config",
    "run_preset",
    "stationarity_residual",
]
