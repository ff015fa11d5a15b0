"""Mixtures of restarted base learners for piecewise-constant estimation."""

from ._core import (
    BoundViolation,
    ConfigError,
    HorizonTooLarge,
    InfeasiblePath,
    InvalidInput,
    Mixture,
    RunComplete,
    StepRecord,
    SwitchmixError,
    best_fixed,
    best_switching,
    criterion_count,
    dyadic_split,
    execute,
    generate,
    mix_estimates,
    mixture_regret_bound,
    run_criterion,
)

__all__ = [
    "BoundViolation",
    "ConfigError",
    "HorizonTooLarge",
    "InfeasiblePath",
    "InvalidInput",
    "Mixture",
    "RunComplete",
    "StepRecord",
    "SwitchmixError",
    "best_fixed",
    "best_switching",
    "criterion_count",
    "dyadic_split",
    "execute",
    "generate",
    "mix_estimates",
    "mixture_regret_bound",
    "run_criterion",
]
