"""Cross curvature flow right-hand sides for diagonal homogeneous metrics.

The flows evolve the metric coefficients (A, B, C) of `geometry.MetricDiag`:

    negative flow      dg/dt = -2 h
    positive flow      dg/dt = +2 h
    normalized flows   dg/dt = -+2 h +- (2/3) hbar g

where h is the diagonal cross curvature tensor and hbar its metric trace,
which for a diagonal homogeneous metric is the scalar

    hbar = h11/A + h22/B + h33/C.

The normalized variants are exactly volume preserving: the logarithmic trace
of the right-hand side, dA/A + dB/B + dC/C, vanishes identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .geometry import _CROSS, CrossDiag, Geometry, MetricDiag

__all__ = [
    "FlowDirection",
    "FlowSpec",
    "RhsTriple",
    "XCF_MINUS",
    "XCF_PLUS",
    "NXCF",
    "NXCF_PLUS",
    "flow_rhs",
    "mean_cross",
    "rhs_function",
]


class FlowDirection(Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"


_FLOW_NAMES = {
    ("negative", False): "xcf-",
    ("positive", False): "xcf+",
    ("negative", True): "nxcf",
    ("positive", True): "nxcf+",
}


@dataclass(frozen=True)
class FlowSpec:
    """Which flow to run: time direction and whether to normalize volume."""

    direction: FlowDirection = FlowDirection.NEGATIVE
    normalized: bool = False

    @property
    def name(self) -> str:
        return _FLOW_NAMES[(self.direction.value, self.normalized)]

    @classmethod
    def from_name(cls, name: str) -> "FlowSpec":
        table = {v: k for k, v in _FLOW_NAMES.items()}
        key = name.strip().lower()
        if key not in table:
            valid = ", ".join(sorted(table))
            raise ValueError(f"unknown flow {name!r}; expected one of: {valid}")
        direction, normalized = table[key]
        return cls(FlowDirection(direction), normalized)


XCF_MINUS = FlowSpec(FlowDirection.NEGATIVE, False)
XCF_PLUS = FlowSpec(FlowDirection.POSITIVE, False)
NXCF = FlowSpec(FlowDirection.NEGATIVE, True)
NXCF_PLUS = FlowSpec(FlowDirection.POSITIVE, True)


class RhsTriple(NamedTuple):
    """Coefficient velocities (dA/dt, dB/dt, dC/dt)."""

    dA: float
    dB: float
    dC: float


def mean_cross(m: MetricDiag, h: CrossDiag) -> float:
    """Metric trace hbar = h11/A + h22/B + h33/C of a diagonal cross tensor."""
    return h.h11 / m.A + h.h22 / m.B + h.h33 / m.C


def rhs_function(geometry: Geometry, spec: FlowSpec) -> Callable[[np.ndarray], np.ndarray]:
    """Compiled right-hand side y -> dy/dt on raw coefficient arrays.

    This is the hot path used by the integrator.  The arithmetic mirrors the
    symmetric grouping of the geometry kernels, so exactly symmetric states
    produce exactly symmetric velocities.
    """
    kernel = _CROSS[geometry]
    sign = 1.0 if spec.direction is FlowDirection.NEGATIVE else -1.0
    if spec.normalized:

        def rhs(y: np.ndarray) -> np.ndarray:
            A, B, C = y
            h1, h2, h3 = kernel(A, B, C)
            q = (2.0 / 3.0) * (h1 / A + h2 / B + h3 / C)
            return np.array(
                (
                    sign * (-2.0 * h1 + q * A),
                    sign * (-2.0 * h2 + q * B),
                    sign * (-2.0 * h3 + q * C),
                )
            )

    else:

        def rhs(y: np.ndarray) -> np.ndarray:
            A, B, C = y
            h1, h2, h3 = kernel(A, B, C)
            return np.array((sign * (-2.0 * h1), sign * (-2.0 * h2), sign * (-2.0 * h3)))

    return rhs


def flow_rhs(geometry: Geometry, m: MetricDiag, spec: FlowSpec) -> RhsTriple:
    """Velocity of the chosen flow at the metric m."""
    d = rhs_function(geometry, spec)(m.as_array())
    return RhsTriple(float(d[0]), float(d[1]), float(d[2]))
