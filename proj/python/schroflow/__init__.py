"""Schrödinger flows into S^2 and H(-1) on periodic grids."""

from ._core import (
    DomainGrid,
    ExitStatus,
    Field,
    FlowConfig,
    InterpolationParams,
    NormComparison,
    NormReport,
    Scheme,
    SchroflowError,
    TargetManifold,
    Trajectory,
    check_interpolation_inequality,
    compare_section_norms,
    constraint_drift,
    energy,
    h_norm,
    make_initial,
    run,
    schrodinger_velocity,
    step,
    tension,
    w_norm,
)

__all__ = [
    "DomainGrid",
    "ExitStatus",
    "Field",
    "FlowConfig",
    "InterpolationParams",
    "NormComparison",
    "NormReport",
    "Scheme",
    "SchroflowError",
    "TargetManifold",
    "Trajectory",
    "check_interpolation_inequality",
    "compare_section_norms",
    "constraint_drift",
    "energy",
    "h_norm",
    "make_initial",
    "run",
    "schrodinger_velocity",
    "step",
    "tension",
    "w_norm",
]
