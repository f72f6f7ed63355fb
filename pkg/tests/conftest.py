"""Shared fixtures: canonical trajectories reused across test modules.

Integration is deterministic, so module-scoped caching of the standard runs
keeps the suite fast without coupling the tests to each other.
"""

from __future__ import annotations

import pytest

from xcflow import (
    Geometry,
    IntegratorOptions,
    MetricDiag,
    NXCF,
    XCF_MINUS,
    integrate,
)


@pytest.fixture(scope="session")
def heisenberg_unit_run():
    return integrate(
        Geometry.HEISENBERG, XCF_MINUS, MetricDiag(1, 1, 1), IntegratorOptions(t_max=100.0)
    )


@pytest.fixture(scope="session")
def sol_symmetric_run():
    return integrate(Geometry.SOL, XCF_MINUS, MetricDiag(1, 8, 1), IntegratorOptions(t_max=10.0))


@pytest.fixture(scope="session")
def sol_generic_run():
    return integrate(Geometry.SOL, XCF_MINUS, MetricDiag(2, 4, 1), IntegratorOptions(t_max=10.0))


@pytest.fixture(scope="session")
def su2_round_run():
    return integrate(Geometry.SU2, XCF_MINUS, MetricDiag(2, 2, 2), IntegratorOptions(t_max=10.0))


@pytest.fixture(scope="session")
def su2_generic_run():
    return integrate(Geometry.SU2, XCF_MINUS, MetricDiag(3, 2, 1), IntegratorOptions(t_max=10.0))


@pytest.fixture(scope="session")
def sl2r_symmetric_run():
    return integrate(Geometry.SL2R, XCF_MINUS, MetricDiag(1, 1, 1), IntegratorOptions(t_max=1e6))


@pytest.fixture(scope="session")
def sl2r_generic_run():
    return integrate(Geometry.SL2R, XCF_MINUS, MetricDiag(1, 2, 1), IntegratorOptions(t_max=10.0))


@pytest.fixture(scope="session")
def e2_generic_run():
    return integrate(Geometry.E2, XCF_MINUS, MetricDiag(2, 1, 1), IntegratorOptions(t_max=1e8))


@pytest.fixture(scope="session")
def nxcf_heisenberg_run():
    return integrate(Geometry.HEISENBERG, NXCF, MetricDiag(1, 2, 3), IntegratorOptions(t_max=2.0))
