"""Fluid and Gaussian approximations for many-server queues with time-varying
arrivals, staffing and abandonment, plus an exact simulator."""

from ._core import (
    ConfigError,
    CriticalLoadingError,
    Error,
    FluidSolution,
    GaussianSolution,
    InfeasibleStaffingError,
    ModelError,
    ModelSpec,
    NumericalError,
    load_model,
    parse_model,
    propagate,
    report,
    simulate,
    sinusoidal_h2_example,
    solve_fluid,
    truncated_moments,
)

__all__ = [
    "ConfigError",
    "CriticalLoadingError",
    "Error",
    "FluidSolution",
    "GaussianSolution",
    "InfeasibleStaffingError",
    "ModelError",
    "ModelSpec",
    "NumericalError",
    "load_model",
    "parse_model",
    "propagate",
    "report",
    "simulate",
    "sinusoidal_h2_example",
    "solve_fluid",
    "truncated_moments",
]
