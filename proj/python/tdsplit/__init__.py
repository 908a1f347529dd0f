"""Time-domain decomposition for linear-quadratic optimal control."""

from ._core import (
    LtiModel,
    TimePartition,
    build_heat,
    build_wave,
    direct_solve,
    dissipation_check,
    heat_split_masks,
    make_model,
    make_partition,
    pr_solve,
    run_config,
    skew_check,
    validate_model,
)

__all__ = [
    "LtiModel",
    "TimePartition",
    "build_heat",
    "build_wave",
    "direct_solve",
    "dissipation_check",
    "heat_split_masks",
    "make_model",
    "make_partition",
    "pr_solve",
    "run_config",
    "skew_check",
    "validate_model",
]
