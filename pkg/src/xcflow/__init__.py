"""Cross curvature flow on locally homogeneous 3-manifolds.

Left-invariant metrics diagonalize in a Milnor frame, so each of the six
model geometries reduces the flow to an ODE system for the three diagonal
coefficients (A, B, C).  This package evaluates the curvature algebra,
integrates the negative, positive, and volume-normalized flows through
finite-time singularities, and measures trajectories against the closed
forms, first integrals, monotone quantities, and asymptotic laws they are
expected to satisfy.

Quick start::

    from xcflow import Geometry, MetricDiag, XCF_MINUS, integrate, verify

    traj = integrate(Geometry.SOL, XCF_MINUS, MetricDiag(1, 8, 1))
    report = verify(traj)
    print(report.termination["kind"], report.blowup_time)
"""

from __future__ import annotations

from .analysis import (
    CheckResult,
    LawResult,
    LimitPowerFit,
    PowerLawFit,
    VerificationReport,
    estimate_blowup_time,
    estimate_blowup_time_from_series,
    estimate_limit_plus_power,
    fit_power_law,
    series_values,
    verify,
)
from .analytic import (
    REGIME_BLOWUP,
    REGIME_INFINITY,
    AsymptoticLaw,
    canonical_permutation,
    classify_branch,
    conserved_quantities,
    expected_asymptotics,
    heisenberg_exact,
    monotone_quantities,
    sol_symmetric_exact,
    su2_round_exact,
)
from .flows import (
    NXCF,
    NXCF_PLUS,
    XCF_MINUS,
    XCF_PLUS,
    FlowDirection,
    FlowSpec,
    flow_rhs,
    mean_cross,
    rhs_function,
)
from .geometry import (
    CrossDiag,
    CurvTriple,
    Geometry,
    MetricDiag,
    cross_curvature_diag,
    cross_from_sectional,
    scalar_curvature,
    sectional_curvatures,
    structure_signs,
)
from .integrator import (
    IntegratorOptions,
    Termination,
    TerminationKind,
    Trajectory,
    integrate,
    sample_at,
)

__version__ = "0.1.0"

__all__ = [
    "Geometry",
    "MetricDiag",
    "CurvTriple",
    "CrossDiag",
    "structure_signs",
    "sectional_curvatures",
    "scalar_curvature",
    "cross_curvature_diag",
    "cross_from_sectional",
    "FlowDirection",
    "FlowSpec",
    "XCF_MINUS",
    "XCF_PLUS",
    "NXCF",
    "NXCF_PLUS",
    "flow_rhs",
    "rhs_function",
    "mean_cross",
    "IntegratorOptions",
    "TerminationKind",
    "Termination",
    "Trajectory",
    "integrate",
    "sample_at",
    "heisenberg_exact",
    "sol_symmetric_exact",
    "su2_round_exact",
    "conserved_quantities",
    "monotone_quantities",
    "expected_asymptotics",
    "classify_branch",
    "canonical_permutation",
    "AsymptoticLaw",
    "PowerLawFit",
    "LimitPowerFit",
    "CheckResult",
    "LawResult",
    "VerificationReport",
    "series_values",
    "REGIME_BLOWUP",
    "REGIME_INFINITY",
    "fit_power_law",
    "estimate_blowup_time",
    "estimate_blowup_time_from_series",
    "estimate_limit_plus_power",
    "verify",
    "__version__",
]
