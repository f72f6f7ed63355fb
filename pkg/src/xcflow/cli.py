"""Command-line front end: `flow run`, `flow verify`, `flow scan`.

`run` integrates a single initial datum and writes the trajectory as CSV
(columns t,A,B,C,k23,k31,k12,h11,h22,h33 at 17 significant digits) or as a
JSON document {meta, samples, termination, analysis}.  `verify` executes
the quantitative acceptance criteria for one geometry or all of them and
writes a JSON report.  `scan` integrates a grid of initial data and writes
one classification row per grid point, ordered by grid index no matter how
the work was scheduled.

Configuration precedence for `run`: built-in defaults, then the JSON config
file (--config, or the path in $XFLOW_CONFIG), then explicit flags.  The
effective configuration is echoed in the output metadata.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 the
integrator gave up after exhausting its step budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Sequence

import numpy as np

from . import acceptance
from .analysis import estimate_blowup_time, verify
from .analytic import classify_branch, canonical_permutation
from .flows import FlowSpec
from .geometry import Geometry, MetricDiag, _sl2r_f, cross_curvature_diag, sectional_curvatures
from .integrator import IntegratorOptions, TerminationKind, Trajectory, integrate

__all__ = [
    "RunConfig",
    "ConfigError",
    "main",
    "trajectory_csv_text",
    "parse_trajectory_csv",
    "emit_parsed_csv",
    "trajectory_json_document",
    "CSV_HEADER",
    "EXIT_OK",
    "EXIT_VERIFY_FAIL",
    "EXIT_USAGE",
    "EXIT_BUDGET",
]

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

CSV_HEADER = "t,A,B,C,k23,k31,k12,h11,h22,h33"
SCAN_HEADER = "index,A0,B0,C0,termination,t_stop,blowup_time,branch,flag"
ENV_CONFIG = "XFLOW_CONFIG"

_GEOMETRY_NAMES = tuple(g.value for g in Geometry)
_FLOW_NAMES = ("xcf-", "xcf+", "nxcf", "nxcf+")


class ConfigError(ValueError):
    """Invalid configuration input (bad key, value, or file)."""


@dataclass(frozen=True)
class RunConfig:
    """Effective settings for a single `run`; mirrors the CLI flags."""

    geometry: str = "heisenberg"
    flow: str = "xcf-"
    init: tuple[float, float, float] = (1.0, 1.0, 1.0)
    t_max: float = 10.0
    rtol: float = 1e-10
    atol: float = 1e-13
    samples: int = 2048
    max_steps: int = 10_000_000
    output: str = "-"
    format: str = "csv"
    analysis: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls().merged(data)

    def merged(self, overrides: dict) -> "RunConfig":
        known = {f.name for f in fields(self)}
        clean: dict = {}
        for raw_key, value in overrides.items():
            key = str(raw_key).replace("-", "_")
            if key not in known:
                raise ConfigError(f"unknown config key {raw_key!r}")
            if value is None:
                continue
            if key == "init":
                value = _parse_init(value)
            elif key in ("t_max", "rtol", "atol"):
                value = float(value)
            elif key in ("samples", "max_steps"):
                value = int(value)
            elif key == "analysis":
                value = bool(value)
            else:
                value = str(value)
            clean[key] = value
        cfg = replace(self, **clean)
        if cfg.geometry not in _GEOMETRY_NAMES:
            raise ConfigError(f"unknown geometry {cfg.geometry!r}; expected one of {', '.join(_GEOMETRY_NAMES)}")
        if cfg.flow not in _FLOW_NAMES:
            raise ConfigError(f"unknown flow {cfg.flow!r}; expected one of {', '.join(_FLOW_NAMES)}")
        if cfg.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {cfg.format!r}; expected csv or json")
        return cfg

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry,
            "flow": self.flow,
            "init": list(self.init),
            "t_max": self.t_max,
            "rtol": self.rtol,
            "atol": self.atol,
            "samples": self.samples,
            "max_steps": self.max_steps,
            "output": self.output,
            "format": self.format,
            "analysis": self.analysis,
        }


def _parse_init(value) -> tuple[float, float, float]:
    if isinstance(value, str):
        parts = value.split(",")
    else:
        parts = list(value)
    if len(parts) != 3:
        raise ConfigError(f"initial data must be three comma-separated values, got {value!r}")
    try:
        a, b, c = (float(p) for p in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"initial data must be numeric, got {value!r}") from None
    return (a, b, c)


def _config_json(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), sort_keys=True, separators=(", ", ": "))


# ---------------------------------------------------------------------------
# Trajectory serialization.


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _row_values(geometry: Geometry, t: float, state: np.ndarray) -> list[float]:
    m = MetricDiag(*state)
    k = sectional_curvatures(geometry, m)
    h = cross_curvature_diag(geometry, m)
    return [t, m.A, m.B, m.C, k.k23, k.k31, k.k12, h.h11, h.h22, h.h33]


def trajectory_csv_text(trajectory: Trajectory, config: RunConfig | None = None) -> str:
    """CSV for a trajectory, one sample per row, 17 significant digits."""
    lines = []
    if config is not None:
        lines.append(f"# config: {_config_json(config)}")
    lines.append(CSV_HEADER)
    for t, state in zip(trajectory.times, trajectory.states):
        lines.append(",".join(_g17(v) for v in _row_values(trajectory.geometry, float(t), state)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedCsv:
    comment: str | None
    columns: dict


def parse_trajectory_csv(text: str) -> ParsedCsv:
    """Parse CSV produced by `trajectory_csv_text` into named float columns."""
    lines = text.splitlines()
    comment = None
    i = 0
    if lines and lines[0].startswith("#"):
        comment = lines[0]
        i = 1
    if i >= len(lines) or lines[i] != CSV_HEADER:
        raise ConfigError(f"missing or unexpected header; expected {CSV_HEADER!r}")
    names = lines[i].split(",")
    data = [[] for _ in names]
    for line in lines[i + 1 :]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise ConfigError(f"row has {len(parts)} fields, expected {len(names)}")
        for slot, part in zip(data, parts):
            slot.append(float(part))
    columns = {name: np.array(vals) for name, vals in zip(names, data)}
    return ParsedCsv(comment, columns)


def emit_parsed_csv(parsed: ParsedCsv) -> str:
    """Re-emit a parsed CSV; inverse of `parse_trajectory_csv` byte for byte."""
    lines = []
    if parsed.comment is not None:
        lines.append(parsed.comment)
    names = list(parsed.columns)
    lines.append(",".join(names))
    n = len(next(iter(parsed.columns.values()))) if parsed.columns else 0
    for i in range(n):
        lines.append(",".join(_g17(parsed.columns[name][i]) for name in names))
    return "\n".join(lines) + "\n"


def trajectory_json_document(trajectory: Trajectory, config: RunConfig) -> dict:
    """JSON document {meta, samples, termination, analysis} for a run."""
    names = CSV_HEADER.split(",")
    rows = [
        _row_values(trajectory.geometry, float(t), state)
        for t, state in zip(trajectory.times, trajectory.states)
    ]
    samples = {name: [row[i] for row in rows] for i, name in enumerate(names)}
    meta = {
        "geometry": trajectory.geometry.value,
        "flow": trajectory.spec.name,
        "init": list(trajectory.m0.as_tuple()),
        "config": config.to_dict(),
        "t_switch": trajectory.t_switch,
        "n_samples": len(rows),
    }
    analysis = verify(trajectory).to_dict() if config.analysis else None
    return {
        "meta": meta,
        "samples": samples,
        "termination": trajectory.termination.to_dict(),
        "analysis": analysis,
    }


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


# ---------------------------------------------------------------------------
# Subcommands.


def _load_config_file(explicit_path: str | None) -> dict:
    path = explicit_path or os.environ.get(ENV_CONFIG)
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def _effective_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig().merged(_load_config_file(args.config))
    flag_overrides = {
        "geometry": args.geometry,
        "flow": args.flow,
        "init": args.init,
        "t_max": args.t_max,
        "rtol": args.rtol,
        "atol": args.atol,
        "samples": args.samples,
        "max_steps": args.max_steps,
        "output": args.output,
        "format": args.format,
        "analysis": False if args.no_analysis else None,
    }
    return cfg.merged(flag_overrides)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _effective_run_config(args)
    geometry = Geometry.from_name(cfg.geometry)
    spec = FlowSpec.from_name(cfg.flow)
    try:
        m0 = MetricDiag(*cfg.init)
        options = IntegratorOptions(
            t_max=cfg.t_max,
            rtol=cfg.rtol,
            atol=cfg.atol,
            samples=cfg.samples,
            max_steps=cfg.max_steps,
        )
    except ValueError as e:
        raise ConfigError(str(e))
    trajectory = integrate(geometry, spec, m0, options)
    if cfg.format == "csv":
        _write_output(cfg.output, trajectory_csv_text(trajectory, cfg))
    else:
        doc = trajectory_json_document(trajectory, cfg)
        _write_output(cfg.output, json.dumps(doc, indent=2) + "\n")
    term = trajectory.termination
    note = f"terminated: {term.kind.value} at t={term.t_stop:.12g}"
    if term.kind is TerminationKind.SINGULAR_TIME:
        try:
            note += f", singular time estimate {estimate_blowup_time(trajectory):.12g}"
        except ValueError:
            pass
    print(note, file=sys.stderr)
    if term.kind is TerminationKind.STEP_BUDGET_EXHAUSTED:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite
    if suite == "all":
        criteria = acceptance.ALL_CRITERIA
    else:
        try:
            geometry = Geometry.from_name(suite)
        except ValueError as e:
            raise ConfigError(str(e))
        criteria = acceptance.criteria_for_geometry(geometry)
    results = [fn() for fn in criteria]
    for result in results:
        print(result.line())
    doc = {
        "suite": suite,
        "passed": all(r.passed for r in results),
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed, "details": list(r.details)}
            for r in results
        ],
        "reports": acceptance.cached_report_dicts(),
    }
    if args.output != "-":
        _write_output(args.output, json.dumps(doc, indent=2) + "\n")
    failing = [r for r in results if not r.passed]
    if failing:
        print("failing criteria: " + ", ".join(f"{r.number} ({r.name})" for r in failing), file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def _parse_axis(text: str) -> np.ndarray:
    parts = str(text).split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) not in (3, 4):
        raise ConfigError(f"bad grid axis {text!r}; expected VALUE or MIN:MAX:COUNT[:log]")
    lo, hi = float(parts[0]), float(parts[1])
    count = int(parts[2])
    log = False
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"bad grid axis suffix {parts[3]!r}; only 'log' is understood")
        log = True
    if count < 1:
        raise ConfigError("grid axis count must be at least 1")
    if count == 1:
        return np.array([lo])
    if log:
        if lo <= 0.0 or hi <= 0.0:
            raise ConfigError("log-spaced axes need positive endpoints")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _scan_flag(geometry: Geometry, trajectory: Trajectory, branch: str) -> str:
    perm = canonical_permutation(geometry, trajectory.m0)
    Sc = trajectory.states[:, perm]
    if geometry is Geometry.SL2R:
        if branch == "symmetric":
            return "symmetric"
        f1, f2, _ = _sl2r_f(Sc[:, 0], Sc[:, 1], Sc[:, 2])
        inside = (f1 < 0.0) & (f2 < 0.0)
        if np.any(inside) and bool(np.all(inside[int(np.argmax(inside)) :])):
            return "entered-region"
        return "no-region"
    if geometry is Geometry.SOL:
        if branch == "symmetric":
            return "symmetric"
        return "3C>A" if 3.0 * Sc[-1, 2] > Sc[-1, 0] else ""
    if geometry is Geometry.E2:
        return "flat" if branch == "flat" else ""
    if geometry is Geometry.SU2:
        return "round" if branch == "round" else ""
    return ""


def _scan_point(payload: tuple) -> dict:
    geom_name, flow_name, a, b, c, t_max, rtol, atol, samples, volume = payload
    geometry = Geometry.from_name(geom_name)
    spec = FlowSpec.from_name(flow_name)
    m0 = MetricDiag(a, b, c)
    if volume is not None:
        m0 = m0.scaled((volume / (a * b * c)) ** (1.0 / 3.0))
    options = IntegratorOptions(t_max=t_max, rtol=rtol, atol=atol, samples=samples)
    trajectory = integrate(geometry, spec, m0, options)
    term = trajectory.termination
    blowup = None
    if term.kind is TerminationKind.SINGULAR_TIME:
        try:
            blowup = estimate_blowup_time(trajectory)
        except ValueError:
            blowup = None
    branch = classify_branch(geometry, m0)
    return {
        "A0": m0.A,
        "B0": m0.B,
        "C0": m0.C,
        "termination": term.kind.value,
        "t_stop": term.t_stop,
        "blowup_time": blowup,
        "branch": branch,
        "flag": _scan_flag(geometry, trajectory, branch),
    }


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        geometry = Geometry.from_name(args.geometry)
        spec = FlowSpec.from_name(args.flow)
    except ValueError as e:
        raise ConfigError(str(e))
    axis_a = _parse_axis(args.grid_A)
    axis_b = _parse_axis(args.grid_B)
    axis_c = _parse_axis(args.grid_C)
    total = len(axis_a) * len(axis_b) * len(axis_c)
    if total > 1_000_000:
        raise ConfigError(f"grid has {total} points; the limit is 1000000")
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")
    payloads = [
        (geometry.value, spec.name, float(a), float(b), float(c),
         args.t_max, args.rtol, args.atol, args.samples, args.normalize_volume)
        for a in axis_a
        for b in axis_b
        for c in axis_c
    ]
    if args.workers == 1:
        rows = [_scan_point(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            chunk = max(1, len(payloads) // (4 * args.workers))
            rows = list(pool.map(_scan_point, payloads, chunksize=chunk))
    lines = [SCAN_HEADER]
    for index, row in enumerate(rows):
        blowup = "" if row["blowup_time"] is None else _g17(row["blowup_time"])
        lines.append(
            ",".join(
                [
                    str(index),
                    _g17(row["A0"]),
                    _g17(row["B0"]),
                    _g17(row["C0"]),
                    row["termination"],
                    _g17(row["t_stop"]),
                    blowup,
                    row["branch"],
                    row["flag"],
                ]
            )
        )
    _write_output(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flow",
        description="Simulate cross curvature flow on locally homogeneous 3-manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one initial datum and write the trajectory")
    run.add_argument("--geometry", choices=_GEOMETRY_NAMES, default=None)
    run.add_argument("--flow", choices=_FLOW_NAMES, default=None)
    run.add_argument("--init", default=None, metavar="A,B,C", help="initial diagonal metric")
    run.add_argument("--t-max", type=float, default=None)
    run.add_argument("--rtol", type=float, default=None)
    run.add_argument("--atol", type=float, default=None)
    run.add_argument("--samples", type=int, default=None)
    run.add_argument("--max-steps", type=int, default=None,
                     help="accepted-step budget before giving up")
    run.add_argument("--output", default=None, metavar="PATH", help="output file, - for stdout")
    run.add_argument("--format", choices=("csv", "json"), default=None)
    run.add_argument("--config", default=None, metavar="PATH",
                     help=f"JSON config file (default: ${ENV_CONFIG})")
    run.add_argument("--no-analysis", action="store_true",
                     help="omit the analysis block from JSON output")
    run.set_defaults(handler=cmd_run)

    ver = sub.add_parser("verify", help="run the acceptance criteria for a geometry or all")
    ver.add_argument("suite", choices=_GEOMETRY_NAMES + ("all",))
    ver.add_argument("--output", default="-", metavar="PATH", help="JSON report file")
    ver.set_defaults(handler=cmd_verify)

    scan = sub.add_parser("scan", help="classify a grid of initial data")
    scan.add_argument("--geometry", choices=_GEOMETRY_NAMES, required=True)
    scan.add_argument("--flow", choices=_FLOW_NAMES, default="xcf-")
    scan.add_argument("--grid-A", required=True, metavar="SPEC",
                      help="VALUE or MIN:MAX:COUNT[:log]")
    scan.add_argument("--grid-B", required=True, metavar="SPEC")
    scan.add_argument("--grid-C", required=True, metavar="SPEC")
    scan.add_argument("--t-max", type=float, default=10.0)
    scan.add_argument("--rtol", type=float, default=1e-10)
    scan.add_argument("--atol", type=float, default=1e-13)
    scan.add_argument("--samples", type=int, default=512)
    scan.add_argument("--normalize-volume", type=float, default=None, metavar="V",
                      help="rescale each initial datum so that A*B*C = V")
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--output", default="-", metavar="PATH")
    scan.set_defaults(handler=cmd_scan)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
