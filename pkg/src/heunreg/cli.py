"""Command-line front end: ``heunreg eval | sweep | selftest``.

Complex numbers are given as ``re,im``. Exit codes: 0 success, 1 failed
self-test, 2 usage error, 3 domain error, 4 convergence error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .continuation import DIRECT_FRACTION, START_FRACTION, plan_path
from .errors import ConvergenceError, DomainError, HeunError
from .heun import EvalResult, heunl, heuns
from .oracle import integrate_path
from .params import HeunParams, branch_cuts, make_params
from .regular import RegConfig, heunl_reg, heuns_reg

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

FUNCTIONS = ("heunl", "heuns", "heunl-reg", "heuns-reg")
SWEEP_COLUMNS = ("axis_re", "axis_im", "value_re", "value_im", "deriv_re",
                 "deriv_im", "err_est", "flags")
PARAM_NAMES = ("a", "q", "alpha", "beta", "gamma", "delta")


def evaluate(fn: str, params: HeunParams, z, tol: float = 1e-12) -> EvalResult:
    """Dispatch one of the four public functions by its CLI name."""
    if fn == "heunl":
        return heunl(params, z, tol)
    if fn == "heuns":
        return heuns(params, z, tol)
    cfg = RegConfig(tol=tol)
    if fn == "heunl-reg":
        return heunl_reg(params, z, cfg)
    if fn == "heuns-reg":
        return heuns_reg(params, z, cfg)
    raise ValueError(f"unknown function {fn!r}")


def verify(fn: str, params: HeunParams, z, result: EvalResult, tol: float = 1e-12) -> float:
    """Relative discrepancy between ``result`` and the oracle integrator.

    The oracle is seeded with the same function at a point close to the
    origin (inside the series disk) and integrated along the polyline of
    the continuation plan, so it sees the same sheet.
    """
    z = complex(z)
    R = params.disk_radius
    if abs(z) < DIRECT_FRACTION * R:
        if z == 0:
            return 0.0
        z0 = 0.5 * z
        vertices = [z0, z]
    else:
        z0 = START_FRACTION * R * z / abs(z)
        plan = plan_path(params, z, branch_cuts(params), True)
        vertices = [z0, *plan.waypoints[1:]]
    seed = evaluate(fn, params, z0, tol)
    H, dH, _ = integrate_path(params, vertices, (seed.value, seed.derivative),
                              cut_zero=True)
    scale = abs(H) + abs(dH)
    return (abs(H - result.value) + abs(dH - result.derivative)) / scale


# ---------------------------------------------------------------------------
# Argument parsing


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    try:
        re_, im_ = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal pair: {text!r}") from None
    if not (math.isfinite(re_) and math.isfinite(im_)):
        raise argparse.ArgumentTypeError(f"non-finite value {text!r}")
    return complex(re_, im_)


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    n: int

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"axis must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axis {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise argparse.ArgumentTypeError(f"axis range must be finite: {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError(f"axis needs at least 2 points: {text!r}")
    return Axis(lo, hi, n)


def parse_grid(text: str):
    """``re_lo:re_hi:n,im_lo:im_hi:n`` into two :class:`Axis` objects."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"grid must be RE_AXIS,IM_AXIS, got {text!r}")
    return _parse_axis(parts[0]), _parse_axis(parts[1])


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("tolerance must be positive and finite")
    return v


def _add_common(p: argparse.ArgumentParser, vary_gamma_or_z: bool):
    p.add_argument("--fn", choices=FUNCTIONS, default="heunl")
    for name in PARAM_NAMES:
        p.add_argument(f"--{name}", type=parse_complex, default=None, metavar="RE,IM")
    p.add_argument("--z", type=parse_complex, default=None, metavar="RE,IM")
    p.add_argument("--tol", type=_positive_float, default=1e-12)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heunreg", description="Heun functions regularized in gamma.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one function at one point")
    _add_common(ev, False)
    ev.add_argument("--verify", action="store_true",
                    help="recompute with the independent ODE integrator")

    sw = sub.add_parser("sweep", help="evaluate over a grid of gamma or z")
    _add_common(sw, True)
    axes = sw.add_mutually_exclusive_group(required=True)
    axes.add_argument("--gamma-grid", type=parse_grid, metavar="RE_LO:RE_HI:N,IM_LO:IM_HI:N")
    axes.add_argument("--z-grid", type=parse_grid, metavar="RE_LO:RE_HI:N,IM_LO:IM_HI:N")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")

    st = sub.add_parser("selftest", help="run the invariant suite")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--filter", default=None, help="substring of invariant names")
    return parser


def _fixed_values(parser, args, varying: str | None):
    missing = [n for n in (*PARAM_NAMES, "z") if n != varying and getattr(args, n) is None]
    if missing:
        parser.error("missing required flags: " + ", ".join("--" + m for m in missing))
    return {n: getattr(args, n) for n in (*PARAM_NAMES, "z") if n != varying}


# ---------------------------------------------------------------------------
# Output


def _fmt(x: float) -> str:
    return "%.17g" % x


def _record(result: EvalResult) -> dict:
    return {
        "value_re": result.value.real, "value_im": result.value.imag,
        "deriv_re": result.derivative.real, "deriv_im": result.derivative.imag,
        "err_est": float(result.err_est), "flags": result.flags.describe(),
    }


def _error_record(exc: HeunError) -> dict:
    return {"value_re": None, "value_im": None, "deriv_re": None, "deriv_im": None,
            "err_est": None, "flags": f"error={exc.category}", "message": exc.message}


def _csv_text(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if row.get(c) is None else
                    (_fmt(row[c]) if isinstance(row[c], float) else row[c])
                    for c in columns])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _exit_code(exc: HeunError) -> int:
    return EXIT_CONVERGENCE if isinstance(exc, ConvergenceError) else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# Commands


def cmd_eval(args, parser) -> int:
    vals = _fixed_values(parser, args, None)
    code = EXIT_OK
    try:
        params = make_params(*(vals[n] for n in PARAM_NAMES))
        result = evaluate(args.fn, params, vals["z"], args.tol)
        row = _record(result)
        if args.verify:
            try:
                row["verify_rel_diff"] = float(verify(args.fn, params, vals["z"], result, args.tol))
            except HeunError as exc:
                row["verify_rel_diff"] = None
                row["verify_error"] = exc.category
    except HeunError as exc:
        row = _error_record(exc)
        code = _exit_code(exc)
    except ValueError as exc:
        parser.error(str(exc))
    if args.format == "json":
        text = json.dumps(row) + "\n"
    else:
        text = _csv_text([row], list(row))
    _emit(text, args.out)
    return code


def _sweep_point(fn, fixed, varying, tol, point):
    vals = dict(fixed)
    vals[varying] = point
    try:
        params = make_params(*(vals[n] for n in PARAM_NAMES))
        row = _record(evaluate(fn, params, vals["z"], tol))
    except HeunError as exc:
        row = _error_record(exc)
        row.pop("message")
    except ValueError as exc:
        row = {c: None for c in SWEEP_COLUMNS}
        row["flags"] = "error=InvalidParameters"
    row["axis_re"] = point.real
    row["axis_im"] = point.imag
    return row


def sweep_points(grid):
    """Grid points in output order: imaginary part outer, real part inner."""
    re_axis, im_axis = grid
    return [complex(x, y) for y in im_axis.points() for x in re_axis.points()]


def run_sweep(fn: str, fixed: dict, varying: str, grid, tol: float = 1e-12,
              jobs: int = 1) -> list:
    """Evaluate over the grid; rows come back in grid order."""
    points = sweep_points(grid)
    work = partial(_sweep_point, fn, fixed, varying, tol)
    if jobs <= 1:
        return [work(p) for p in points]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, points, chunksize=max(1, len(points) // (8 * jobs))))


def cmd_sweep(args, parser) -> int:
    varying = "gamma" if args.gamma_grid is not None else "z"
    grid = args.gamma_grid or args.z_grid
    fixed = _fixed_values(parser, args, varying)
    rows = run_sweep(args.fn, fixed, varying, grid, args.tol, args.jobs)
    if args.format == "json":
        text = json.dumps([{c: r.get(c) for c in SWEEP_COLUMNS} for r in rows]) + "\n"
    else:
        text = _csv_text(rows, SWEEP_COLUMNS)
    _emit(text, args.out)
    return EXIT_OK


def cmd_selftest(args, parser) -> int:
    from .selftest import run_selftest

    report = run_selftest(seed=args.seed, name_filter=args.filter)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_SELFTEST


_NUMERIC_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv):
    """Rewrite ``--flag -1,0`` as ``--flag=-1,0``.

    argparse would otherwise read a value such as ``-1,0`` or
    ``-4.5:2.5:141,-1:1:41`` as an unknown option.
    """
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and _NUMERIC_VALUE.match(tok)):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    handler = {"eval": cmd_eval, "sweep": cmd_sweep, "selftest": cmd_selftest}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
