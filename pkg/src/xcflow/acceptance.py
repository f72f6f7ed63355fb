"""Headline verification suite: eleven quantitative pass/fail criteria.

Each criterion exercises one advertised capability end to end (integrate,
then measure) and states exactly what it checked and what it observed.  The
test suite and the `flow verify` subcommand both run these; keeping them
here makes the two entry points report identical numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import (
    CONSERVED_DRIFT_TOL,
    VerificationReport,
    verify,
)
from .flows import NXCF, XCF_MINUS, FlowSpec, flow_rhs
from .geometry import (
    Geometry,
    MetricDiag,
    cross_curvature_diag,
    cross_from_sectional,
    sectional_curvatures,
)
from .integrator import IntegratorOptions, TerminationKind, Trajectory, integrate

__all__ = ["CriterionResult", "ALL_CRITERIA", "run_criterion", "run_all", "criteria_for_geometry"]

_ORACLE_SEED = 20260814
_ORACLE_DRAWS = 10_000
_SCALING_DRAWS = 1_000
_ORACLE_TOL = 1e-12

_NXCF_SEEDS: dict[Geometry, tuple[float, float, float]] = {
    Geometry.HEISENBERG: (1.0, 2.0, 3.0),
    Geometry.SOL: (2.0, 4.0, 1.0),
    Geometry.SU2: (3.0, 2.0, 1.0),
    Geometry.SL2R: (1.0, 2.0, 1.0),
    Geometry.E2: (2.0, 1.0, 1.0),
    Geometry.TRIVIAL: (1.0, 2.0, 3.0),
}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: tuple[str, ...]

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.number:2d} {self.name}: " + "; ".join(self.details)


_TRAJ_CACHE: dict[tuple, Trajectory] = {}
_REPORT_CACHE: dict[tuple, VerificationReport] = {}


def _traj(geometry: Geometry, flow: FlowSpec, init: tuple[float, float, float], t_max: float) -> Trajectory:
    key = (geometry, flow, init, t_max)
    if key not in _TRAJ_CACHE:
        _TRAJ_CACHE[key] = integrate(
            geometry, flow, MetricDiag(*init), IntegratorOptions(t_max=t_max)
        )
    return _TRAJ_CACHE[key]


def _report(geometry: Geometry, flow: FlowSpec, init: tuple[float, float, float], t_max: float) -> VerificationReport:
    key = (geometry, flow, init, t_max)
    if key not in _REPORT_CACHE:
        _REPORT_CACHE[key] = verify(_traj(geometry, flow, init, t_max))
    return _REPORT_CACHE[key]


def _check(report: VerificationReport, name: str):
    for c in report.checks:
        if c.name == name:
            return c
    raise LookupError(f"report has no check named {name!r}")


def _law(report: VerificationReport, variable: str):
    for l in report.laws:
        if l.variable == variable:
            return l
    raise LookupError(f"report has no law for {variable!r}")


def _monotone(report: VerificationReport, prefix: str):
    for c in report.monotone:
        if c.name.startswith(prefix):
            return c
    raise LookupError(f"report has no monotone entry starting with {prefix!r}")


def _fmt_check(c) -> str:
    if c.observed is None or c.threshold is None:
        return f"{c.name}: {c.detail or ('ok' if c.passed else 'failed')}"
    return f"{c.name}: {c.observed:.3e} (tol {c.threshold:.0e})"


def _fmt_law(l) -> str:
    s = f"{l.variable}: exponent {l.fitted_exponent:+.5f} vs {l.expected_exponent:+.5f} (tol {l.exponent_tolerance})"
    if l.expected_coefficient is not None and l.fitted_coefficient is not None:
        s += f", coeff {l.fitted_coefficient:.5g} vs {l.expected_coefficient:.5g}"
    return s


def criterion_heisenberg_closed_form() -> CriterionResult:
    rep = _report(Geometry.HEISENBERG, XCF_MINUS, (1.0, 1.0, 1.0), 100.0)
    c = _check(rep, "closed form")
    return CriterionResult(1, "nil closed form", c.passed, (_fmt_check(c),))


def criterion_heisenberg_invariants() -> CriterionResult:
    rep = _report(Geometry.HEISENBERG, XCF_MINUS, (1.0, 1.0, 1.0), 100.0)
    wanted = ("A^3*B", "A^3*C", "B/C")
    rows = [c for c in rep.conserved if c.name in wanted]
    ok = len(rows) == 3 and all(c.passed for c in rows)
    return CriterionResult(2, "nil first integrals", ok, tuple(_fmt_check(c) for c in rows))


def criterion_sol_symmetric() -> CriterionResult:
    rep = _report(Geometry.SOL, XCF_MINUS, (1.0, 8.0, 1.0), 10.0)
    singular = rep.termination["kind"] == TerminationKind.SINGULAR_TIME.value
    t0 = _check(rep, "singular time = B0^2/64")
    lock = _check(rep, "A=C locked")
    closed = _check(rep, "closed form (t <= 0.99 T0)")
    ok = singular and t0.passed and lock.passed and closed.passed
    details = (
        f"termination {rep.termination['kind']}",
        f"singular time {rep.blowup_time!r} vs 1.0: " + _fmt_check(t0),
        _fmt_check(lock),
        _fmt_check(closed),
    )
    return CriterionResult(3, "sol symmetric collapse", ok, details)


def criterion_sol_generic() -> CriterionResult:
    rep = _report(Geometry.SOL, XCF_MINUS, (2.0, 4.0, 1.0), 10.0)
    laws = [_law(rep, v) for v in ("B", "A", "C", "A-C")]
    rep2 = _report(Geometry.SOL, XCF_MINUS, (5.0, 4.0, 1.0), 10.0)
    sign = _check(rep2, "A-3C changes sign before the singular time")
    ok = all(l.passed for l in laws) and sign.passed
    details = tuple(_fmt_law(l) for l in laws) + (_fmt_check(sign),)
    return CriterionResult(4, "sol generic blow-up laws", ok, details)


def criterion_su2() -> CriterionResult:
    round_rep = _report(Geometry.SU2, XCF_MINUS, (2.0, 2.0, 2.0), 10.0)
    closed = _check(round_rep, "closed form (t <= 0.99 T0)")
    gen = _report(Geometry.SU2, XCF_MINUS, (3.0, 2.0, 1.0), 10.0)
    singular = gen.termination["kind"] == TerminationKind.SINGULAR_TIME.value
    ratio = _check(gen, "A/C -> 1")
    a_law = _law(gen, "A")
    ok = closed.passed and singular and ratio.passed and a_law.passed
    details = (
        "round: " + _fmt_check(closed),
        f"generic termination {gen.termination['kind']}",
        "generic " + _fmt_check(ratio),
        "generic " + _fmt_law(a_law),
    )
    return CriterionResult(5, "su2 collapse", ok, details)


def criterion_sl2r_symmetric() -> CriterionResult:
    rep = _report(Geometry.SL2R, XCF_MINUS, (1.0, 1.0, 1.0), 1.0e6)
    lock = _check(rep, "B=C locked")
    b_law = _law(rep, "B")
    rel = _check(rep, "B coefficient = (24 Ainf)^(1/3)")
    mono = _monotone(rep, "4/A+1/B")
    quad = _check(rep, "d/dt(A^9 B^3) = 24 A^10 (trapezoid)")
    ok = lock.passed and b_law.passed and rel.passed and mono.passed and quad.passed
    details = (_fmt_check(lock), _fmt_law(b_law), _fmt_check(rel), _fmt_check(mono), _fmt_check(quad))
    return CriterionResult(6, "sl2r symmetric pancake", ok, details)


def criterion_sl2r_generic() -> CriterionResult:
    rep = _report(Geometry.SL2R, XCF_MINUS, (1.0, 2.0, 1.0), 10.0)
    region = _check(rep, "F1<0 and F2<0 entered and retained")
    laws = [_law(rep, v) for v in ("C", "A", "B")]
    ratio = _check(rep, "A/B -> 1")
    ok = region.passed and all(l.passed for l in laws) and ratio.passed
    details = (_fmt_check(region),) + tuple(_fmt_law(l) for l in laws) + (_fmt_check(ratio),)
    return CriterionResult(7, "sl2r generic blow-up laws", ok, details)


def criterion_e2() -> CriterionResult:
    flat = _report(Geometry.E2, XCF_MINUS, (3.0, 3.0, 1.0), 10.0)
    stat = _check(flat, "exactly stationary")
    rep = _report(Geometry.E2, XCF_MINUS, (2.0, 1.0, 1.0), 1.0e8)
    gap_law = _law(rep, "A-B")
    c_law = _law(rep, "C")
    prod = _monotone(rep, "(A-B)^2*C")
    settle = _check(rep, "(A-B)^2*C settles over the last decade")
    rel = _check(rep, "C coefficient = (8 E2/E1) sqrt(6)")
    ok = stat.passed and gap_law.passed and c_law.passed and prod.passed and settle.passed and rel.passed
    details = (
        "flat: " + _fmt_check(stat),
        _fmt_law(gap_law),
        _fmt_law(c_law),
        _fmt_check(prod),
        _fmt_check(settle),
        _fmt_check(rel),
    )
    return CriterionResult(8, "e2 cigar laws", ok, details)


def criterion_nxcf_volume() -> CriterionResult:
    details = []
    ok = True
    for geom, init in _NXCF_SEEDS.items():
        rep = _report(geom, NXCF, init, 2.0)
        vol = next((c for c in rep.conserved if c.name == "A*B*C"), None)
        if vol is None:
            ok = False
            details.append(f"{geom.value}: volume row missing")
            continue
        ok = ok and vol.passed
        details.append(f"{geom.value}: drift {vol.observed:.3e} (tol {CONSERVED_DRIFT_TOL:.0e})")
    return CriterionResult(9, "normalized flow preserves volume", ok, tuple(details))


def _random_metrics(rng: np.random.Generator, n: int) -> np.ndarray:
    return 10.0 ** rng.uniform(-2.0, 2.0, size=(n, 3))


def criterion_oracle_equivalence() -> CriterionResult:
    rng = np.random.default_rng(_ORACLE_SEED)
    worst = 0.0
    worst_geom = ""
    for geom in Geometry:
        draws = _random_metrics(rng, _ORACLE_DRAWS)
        for row in draws:
            m = MetricDiag(*row)
            direct = np.array(cross_curvature_diag(geom, m))
            via_k = np.array(cross_from_sectional(m, sectional_curvatures(geom, m)))
            scale = float(np.max(np.abs(direct)))
            if scale == 0.0:
                err = float(np.max(np.abs(direct - via_k)))
            else:
                err = float(np.max(np.abs(direct - via_k)) / scale)
            if err > worst:
                worst, worst_geom = err, geom.value
    ok = worst <= _ORACLE_TOL
    return CriterionResult(
        10,
        "product form matches principal-curvature oracle",
        ok,
        (f"worst max-entry-relative gap {worst:.3e} ({worst_geom or 'all zero'}) over "
         f"{_ORACLE_DRAWS} draws per geometry (tol {_ORACLE_TOL:.0e})",),
    )


def criterion_scaling_law() -> CriterionResult:
    rng = np.random.default_rng(_ORACLE_SEED + 1)
    worst = 0.0
    worst_geom = ""
    for geom in Geometry:
        draws = _random_metrics(rng, _SCALING_DRAWS)
        lams = 10.0 ** rng.uniform(-3.0, 3.0, size=_SCALING_DRAWS)
        for row, lam in zip(draws, lams):
            m = MetricDiag(*row)
            for spec in (XCF_MINUS, NXCF):
                base = np.array(flow_rhs(geom, m, spec))
                scaled = np.array(flow_rhs(geom, m.scaled(lam), spec))
                expected = base / lam
                scale = float(np.max(np.abs(expected)))
                if scale == 0.0:
                    err = float(np.max(np.abs(scaled - expected)))
                else:
                    err = float(np.max(np.abs(scaled - expected)) / scale)
                if err > worst:
                    worst, worst_geom = err, geom.value
    ok = worst <= _ORACLE_TOL
    return CriterionResult(
        11,
        "velocity field scales inversely with the metric",
        ok,
        (f"worst relative gap {worst:.3e} ({worst_geom or 'all zero'}) over "
         f"{_SCALING_DRAWS} (metric, scale) pairs per geometry and both flow kinds (tol {_ORACLE_TOL:.0e})",),
    )


ALL_CRITERIA = (
    criterion_heisenberg_closed_form,
    criterion_heisenberg_invariants,
    criterion_sol_symmetric,
    criterion_sol_generic,
    criterion_su2,
    criterion_sl2r_symmetric,
    criterion_sl2r_generic,
    criterion_e2,
    criterion_nxcf_volume,
    criterion_oracle_equivalence,
    criterion_scaling_law,
)

_GEOMETRY_CRITERIA: dict[Geometry, tuple] = {
    Geometry.HEISENBERG: (criterion_heisenberg_closed_form, criterion_heisenberg_invariants),
    Geometry.SOL: (criterion_sol_symmetric, criterion_sol_generic),
    Geometry.SU2: (criterion_su2,),
    Geometry.SL2R: (criterion_sl2r_symmetric, criterion_sl2r_generic),
    Geometry.E2: (criterion_e2,),
    Geometry.TRIVIAL: (),
}


def criteria_for_geometry(geometry: Geometry) -> tuple:
    """Criteria specific to one geometry, plus the cross-geometry ones."""
    return _GEOMETRY_CRITERIA[geometry] + (
        criterion_nxcf_volume,
        criterion_oracle_equivalence,
        criterion_scaling_law,
    )


def cached_report_dicts() -> dict[str, dict]:
    """JSON-ready dump of every verification report produced so far."""
    out = {}
    for (geom, flow, init, t_max), rep in _REPORT_CACHE.items():
        label = f"{geom.value} {flow.name} init=({init[0]:g},{init[1]:g},{init[2]:g}) t_max={t_max:g}"
        out[label] = rep.to_dict()
    return out


def run_criterion(fn) -> CriterionResult:
    return fn()


def run_all() -> list[CriterionResult]:
    return [fn() for fn in ALL_CRITERIA]
