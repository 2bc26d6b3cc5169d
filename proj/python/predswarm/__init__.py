"""Stochastic predator-prey schooling simulator (C++ core)."""

from ._predswarm import (
    DivergenceError,
    ParseError,
    SimParams,
    Strategy,
    Swarm,
    ValidationError,
    __version__,
    count_subgroups,
    derive_seed,
    generate_school,
    load_config,
    parse_config,
    preset,
    run_trial,
    run_trials,
    school_diameter,
    sweep,
    to_config_text,
    validate,
    velocity_std,
)

__all__ = [
    "DivergenceError",
    "ParseError",
    "SimParams",
    "Strategy",
    "Swarm",
    "ValidationError",
    "__version__",
    "count_subgroups",
    "derive_seed",
    "generate_school",
    "load_config",
    "parse_config",
    "preset",
    "run_trial",
    "run_trials",
    "school_diameter",
    "sweep",
    "to_config_text",
    "validate",
    "velocity_std",
]
