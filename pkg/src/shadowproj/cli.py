"""Command-line front end.

Exit codes: 0 success, 2 config/validation error, 3 solver did not
converge, 4 I/O error, 5 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracle, output
from .errors import ConvergenceError, DomainError, ValidationError
from .gauge_core import ConvexBody, body_from_dict
from .quartic_plane import analytic_boundary_trace, analytic_shadow_gauge, quartic_problem
from .shadow import TOL_GRAD, TOL_MEMBER, FiberQuery, boundary_trace, fiber_minimize
from .subspace import OrthoFrame, frame_from_dict, projector_matrix

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4
EXIT_VERIFY = 5

DEFAULT_SAMPLES = 360
QUARTIC_SAMPLES = 720
QUARTIC_MAX_DISCREPANCY = 1e-6


class ConfigError(ValidationError):
    pass


@dataclass
class ProblemConfig:
    body: ConvexBody | None = None
    frame: OrthoFrame | None = None
    tol_grad: float = TOL_GRAD
    tol_member: float = TOL_MEMBER
    fd_step: float | None = None
    fmt: str = "csv"
    path: str | None = None
    n_samples: int = DEFAULT_SAMPLES
    raw: dict = field(default_factory=dict)


def _positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"field 'tolerances.{name}': expected a number, got {value!r}") from None
    if not value > 0.0 or not math.isfinite(value):
        raise ConfigError(f"field 'tolerances.{name}': must be positive, got {value!r}")
    return value


def load_config(path) -> ProblemConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(raw)


def parse_config(raw: dict) -> ProblemConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    cfg = ProblemConfig(raw=raw)
    if "body" not in raw:
        raise ConfigError("field 'body': missing")
    try:
        cfg.body = body_from_dict(raw["body"])
    except ValidationError as exc:
        raise ConfigError(f"field 'body': {exc}") from None
    if "subspace" in raw:
        try:
            cfg.frame = frame_from_dict(cfg.body.dim, raw["subspace"])
        except ValidationError as exc:
            raise ConfigError(f"field 'subspace': {exc}") from None
    tol = raw.get("tolerances") or {}
    if not isinstance(tol, dict):
        raise ConfigError("field 'tolerances': expected an object")
    if "tol_grad" in tol:
        cfg.tol_grad = _positive("tol_grad", tol["tol_grad"])
    if "tol_member" in tol:
        cfg.tol_member = _positive("tol_member", tol["tol_member"])
    if "fd_step" in tol:
        cfg.fd_step = _positive("fd_step", tol["fd_step"])
    out = raw.get("output") or {}
    if not isinstance(out, dict):
        raise ConfigError("field 'output': expected an object")
    cfg.fmt = out.get("format", cfg.fmt)
    cfg.path = out.get("path")
    if "n_samples" in raw:
        cfg.n_samples = raw["n_samples"]
    return cfg


def _apply_flags(cfg: ProblemConfig, args) -> ProblemConfig:
    if args.tol_grad is not None:
        cfg.tol_grad = _positive("tol_grad", args.tol_grad)
    if args.tol_member is not None:
        cfg.tol_member = _positive("tol_member", args.tol_member)
    if args.samples is not None:
        cfg.n_samples = args.samples
    if args.format is not None:
        cfg.fmt = args.format
    if args.out is not None:
        cfg.path = args.out
    if cfg.fmt not in ("csv", "svg", "both"):
        raise ConfigError(f"field 'output.format': expected csv, svg or both, got {cfg.fmt!r}")
    if not isinstance(cfg.n_samples, int) or isinstance(cfg.n_samples, bool):
        raise ConfigError(f"field 'n_samples': expected an integer, got {cfg.n_samples!r}")
    return cfg


def _config_from_args(args, need_frame=True) -> ProblemConfig:
    if args.config is None:
        raise ConfigError("--config is required for this command")
    cfg = _apply_flags(load_config(args.config), args)
    if need_frame and cfg.frame is None:
        raise ConfigError("field 'subspace': missing")
    return cfg


def _parse_point(tokens, dim, what="point") -> np.ndarray:
    parts = [p for tok in tokens for p in tok.replace(",", " ").split()]
    try:
        x = np.array([float(p) for p in parts])
    except ValueError:
        raise ConfigError(f"{what}: could not parse {' '.join(tokens)!r} as numbers") from None
    if x.shape[0] != dim:
        raise ConfigError(f"{what}: expected {dim} coordinates, got {x.shape[0]}")
    return x


def fmt_num(x: float, digits: int = 16) -> str:
    return format(float(x), f".{digits}g")


def _vec(v) -> str:
    return "(" + ", ".join(fmt_num(c) for c in np.atleast_1d(v)) + ")"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_gauge(args) -> int:
    cfg = _config_from_args(args, need_frame=False)
    x = _parse_point(args.point, cfg.body.dim)
    print(fmt_num(cfg.body.gauge(np.ascontiguousarray(x))))
    return EXIT_OK


def _resolve_y(cfg, args) -> np.ndarray:
    if args.plane:
        return _parse_point(args.point, cfg.frame.m, "plane point")
    x = _parse_point(args.point, cfg.body.dim)
    y = projector_matrix(cfg.frame) @ x
    # drop rounding residue left by the change of basis
    y[np.abs(y) <= 8.0 * np.finfo(float).eps * np.linalg.norm(x)] = 0.0
    return y


def cmd_project(args) -> int:
    cfg = _config_from_args(args)
    y = _resolve_y(cfg, args)
    res = fiber_minimize(FiberQuery(cfg.body, cfg.frame, y), tol_grad=cfg.tol_grad)
    member = res.t_star <= 1.0 + cfg.tol_member
    print(f"y: {_vec(y)}")
    print(f"shadow gauge: {fmt_num(res.t_star)}")
    print(f"w*: {_vec(res.w_star)}")
    print(f"grad_norm: {res.grad_norm:.3e}")
    print(f"iterations: {res.iterations}")
    print(f"converged: {'yes' if res.converged else 'no'}")
    print(f"member: {'yes' if member else 'no'}")
    return EXIT_OK if res.converged else EXIT_SOLVER


def cmd_member(args) -> int:
    cfg = _config_from_args(args)
    y = _resolve_y(cfg, args)
    res = fiber_minimize(FiberQuery(cfg.body, cfg.frame, y), tol_grad=cfg.tol_grad)
    if not res.converged:
        print(f"error: fiber solve did not converge (|grad|={res.grad_norm:.3e})", file=sys.stderr)
        return EXIT_SOLVER
    print("yes" if res.t_star <= 1.0 + cfg.tol_member else "no")
    return EXIT_OK


def _output_paths(path, fmt, default_stem):
    base = Path(path) if path else Path(default_stem)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    out = {}
    if fmt in ("csv", "both"):
        out["csv"] = base.with_suffix(".csv")
    if fmt in ("svg", "both"):
        out["svg"] = base.with_suffix(".svg")
    return out


def cmd_trace(args) -> int:
    cfg = _config_from_args(args)
    if cfg.n_samples < 8:
        raise ConfigError(f"n_samples must be at least 8, got {cfg.n_samples}")
    if cfg.frame.m != 2:
        raise ConfigError(f"trace needs a 2-dimensional subspace, got m={cfg.frame.m}")
    poly = boundary_trace(cfg.body, cfg.frame, cfg.n_samples, tol_grad=cfg.tol_grad)
    paths = _output_paths(cfg.path, cfg.fmt, "trace")
    if "csv" in paths:
        output.write_csv(poly, paths["csv"])
    if "svg" in paths:
        output.write_svg(poly, paths["svg"], labels=["shadow"])
    for p in paths.values():
        print(p)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    reports = oracle.run_suite(cfg.body, cfg.frame, seed=args.seed, fd_step=cfg.fd_step)
    for r in reports:
        print(r.row())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("name,passed,n_samples,max_abs_err,max_rel_err,tolerance\n")
            for r in reports:
                fh.write(f"{r.name},{int(r.passed)},{r.n_samples},{r.max_abs_err:.17g},"
                         f"{r.max_rel_err:.17g},{r.tolerance:.17g}\n")
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"worst case for {r.name}: {r.worst_case_input}")
    return EXIT_VERIFY if failed else EXIT_OK


def quartic_summary(n_samples: int = QUARTIC_SAMPLES):
    """Both traces of the 4-norm example, their discrepancy and axis radii."""
    body, frame = quartic_problem()
    analytic = analytic_boundary_trace(n_samples)
    numeric = boundary_trace(body, frame, n_samples)
    disc = oracle.polyline_hausdorff(analytic, numeric)
    summary = {
        "n_samples": n_samples,
        "u_axis_radius": 1.0 / analytic_shadow_gauge(1.0, 0.0),
        "v_axis_radius": 1.0 / analytic_shadow_gauge(0.0, 1.0),
        "max_discrepancy": disc,
    }
    return analytic, numeric, summary


def cmd_example_quartic(args) -> int:
    n = args.samples if args.samples is not None else QUARTIC_SAMPLES
    if n < 8:
        raise ConfigError(f"n_samples must be at least 8, got {n}")
    out_dir = Path(args.out) if args.out else Path("quartic_example")
    t0 = time.perf_counter()
    analytic, numeric, summary = quartic_summary(n)
    elapsed = time.perf_counter() - t0
    out_dir.mkdir(parents=True, exist_ok=True)
    output.write_csv(analytic, out_dir / "analytic.csv")
    output.write_csv(numeric, out_dir / "numeric.csv")
    output.write_svg([analytic, numeric], out_dir / "overlay.svg", labels=["analytic", "numeric"])
    lines = [
        f"samples: {summary['n_samples']}",
        f"u-axis radius: {summary['u_axis_radius']:.9f}",
        f"v-axis radius: {summary['v_axis_radius']:.9f}",
        f"max discrepancy (Hausdorff): {summary['max_discrepancy']:.3e}",
        f"tolerance: {QUARTIC_MAX_DISCREPANCY:.0e}",
    ]
    (out_dir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for line in lines:
        print(line)
    print(f"elapsed: {elapsed:.2f} s")
    return EXIT_OK if summary["max_discrepancy"] <= QUARTIC_MAX_DISCREPANCY else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="problem definition (JSON)")
    common.add_argument("--out", help="output path (file, stem or directory depending on command)")
    common.add_argument("--samples", type=int, help="number of boundary samples")
    common.add_argument("--tol-grad", type=float, dest="tol_grad")
    common.add_argument("--tol-member", type=float, dest="tol_member")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["csv", "svg", "both"])

    parser = argparse.ArgumentParser(
        prog="shadowproj",
        description="Orthogonal projections of smooth convex bodies via their gauge.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gauge", parents=[common], help="evaluate the body gauge at a point")
    p.add_argument("point", nargs="+", help="coordinates, space or comma separated")
    p.set_defaults(func=cmd_gauge)

    for name, func, text in (
        ("project", cmd_project, "shadow gauge and fiber minimiser for a point"),
        ("member", cmd_member, "whether a point lies in the shadow"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("point", nargs="+")
        p.add_argument("--plane", action="store_true",
                       help="point is given in subspace coordinates instead of ambient ones")
        p.set_defaults(func=func)

    p = sub.add_parser("trace", parents=[common], help="trace the boundary of a planar shadow")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", parents=[common], help="run the oracle suite for a problem")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example-quartic", parents=[common],
                       help="4-norm ball of R^3 projected on x+y+z=0, two ways")
    p.set_defaults(func=cmd_example_quartic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
