"""Command-line front end.

Five subcommands: solve (delta-solution JSON), curves (CSV tables of the
shock loci and rarefaction curves from a base state), sample (regular part
on an x-grid at fixed time, plus a sidecar listing the Dirac carriers),
verify (property suite report), fv-compare (finite-volume refinement
table).  Outputs land in --out, the BRIODELTA_OUT directory, or the
working directory, with fixed file names so reruns are byte-identical.

Exit codes: 0 success, 1 bad input or a solver error (machine-readable
JSON on stderr), 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import importlib.resources
import json
import math
import os
import sys

import numpy as np
from jsonschema import validate

from .core import BrioState, RiemannData, TransState, lift
from .delta import sample_brio_many, solution_to_dict, solve_brio
from .errors import BrioError, PreconditionError
from .riemann import build_fan
from .verify import FvGrid, compare_fan_fv, property_suite
from .wave_curves import tabulate_curve

ENV_OUT = "BRIODELTA_OUT"

# Config keys each subcommand accepts (anything else is rejected).
_ALLOWED_KEYS = {
    "solve": {"left", "right", "flip_speed", "tol_root", "tol_ode", "out"},
    "curves": {"base", "family", "span", "samples", "out"},
    "sample": {"left", "right", "flip_speed", "time", "x_min", "x_max",
               "nx", "out"},
    "verify": {"seed", "arclength", "tol_weak", "out"},
    "fv-compare": {"left", "right", "x_min", "x_max", "final_time", "cfl",
                   "ladder", "out"},
}

_CURVE_KINDS = {
    "1": ("sw1", "rw1"),
    "2": ("sw2", "rw2"),
    "all": ("sw1", "sw2", "rw1", "rw2"),
    "inverse": ("sw2_inv", "rw2_inv"),
}

# Branches parametrized below the base state (the rest run above it).
_DESCENDING = {"sw1", "sw2", "rw2_inv"}


def _fmt(x: float) -> str:
    return "%.17g" % x


def _parse_pair(value, what: str) -> tuple[float, float]:
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = str(value).split(",")
    if len(parts) != 2:
        raise PreconditionError(f"{what} must be two comma-separated numbers")
    try:
        return float(parts[0]), float(parts[1])
    except (TypeError, ValueError):
        raise PreconditionError(f"{what} must be numeric, got {value!r}")


def _schema(name: str) -> dict:
    path = importlib.resources.files("briodelta") / "schemas" / name
    with path.open("r", encoding="utf-8") as f:
        return json.load(f)


def _apply_config(args: argparse.Namespace, subcommand: str) -> None:
    if getattr(args, "config", None) is None:
        return
    with open(args.config, "r", encoding="utf-8") as f:
        cfg = json.load(f)
    if not isinstance(cfg, dict):
        raise PreconditionError("config file must hold a JSON object")
    unknown = sorted(set(cfg) - _ALLOWED_KEYS[subcommand])
    if unknown:
        raise PreconditionError(
            f"unknown config keys for {subcommand}: {', '.join(unknown)}")
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if getattr(args, dest, None) is not None:
            print(f"warning: config file overrides --{key.replace('_', '-')}",
                  file=sys.stderr)
        setattr(args, dest, value)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0:
        raise PreconditionError(f"{name} must be positive, got {value!r}")
    return value


def _out_dir(args: argparse.Namespace) -> str:
    out = args.out or os.environ.get(ENV_OUT) or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_json(path: str, doc: dict, schema_name: str) -> None:
    validate(doc, _schema(schema_name))
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _riemann_data(args: argparse.Namespace) -> RiemannData:
    if args.left is None or args.right is None:
        raise PreconditionError("left and right states are required")
    ul, vl = _parse_pair(args.left, "left state")
    ur, vr = _parse_pair(args.right, "right state")
    return RiemannData(BrioState(ul, vl), BrioState(ur, vr))


def _flip_speed(args: argparse.Namespace):
    fs = args.flip_speed if args.flip_speed is not None else "rh"
    if fs not in ("rh", "paper"):
        raise PreconditionError(
            f"flip-speed must be 'rh' or 'paper', got {fs!r}")
    return fs


def _cmd_solve(args: argparse.Namespace) -> int:
    data = _riemann_data(args)
    kwargs = {"flip_speed": _flip_speed(args)}
    if args.tol_root is not None:
        kwargs["tol_root"] = _require_positive("tol_root", args.tol_root)
    if args.tol_ode is not None:
        kwargs["tol_ode"] = _require_positive("tol_ode", args.tol_ode)
    sol = solve_brio(data, **kwargs)
    doc = solution_to_dict(sol)
    path = os.path.join(_out_dir(args), "solution.json")
    _write_json(path, doc, "solution.schema.json")
    print(path)
    return 0


def _cmd_curves(args: argparse.Namespace) -> int:
    if args.base is None:
        raise PreconditionError("a base state is required")
    bu, bq = _parse_pair(args.base, "base state")
    base = TransState(bu, bq)
    family = args.family if args.family is not None else "all"
    if family not in _CURVE_KINDS:
        raise PreconditionError(
            f"family must be one of 1, 2, all, inverse; got {family!r}")
    span = _require_positive("span", args.span if args.span is not None
                             else 2.0)
    samples = int(args.samples if args.samples is not None else 257)
    if samples < 2:
        raise PreconditionError("samples must be at least 2")
    out = _out_dir(args)
    written = []
    for kind in _CURVE_KINDS[family]:
        if kind in _DESCENDING:
            us = np.linspace(base.u - span, base.u, samples)
        else:
            us = np.linspace(base.u, base.u + span, samples)
        rows = tabulate_curve(kind, base, us)
        path = os.path.join(out, f"{kind}.csv")
        _write_csv(path, ("u", "q", "lambda"), rows)
        written.append(path)
    print("\n".join(written))
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    data = _riemann_data(args)
    sol = solve_brio(data, flip_speed=_flip_speed(args))
    t = _require_positive("time", args.time if args.time is not None else 1.0)
    finite = [s.speed for s in sol.singular]
    for seg in sol.segments:
        finite += [b for b in (seg.xi_lo, seg.xi_hi) if math.isfinite(b)]
    x_min = args.x_min if args.x_min is not None else \
        min(finite + [0.0]) * t - 1.0
    x_max = args.x_max if args.x_max is not None else \
        max(finite + [0.0]) * t + 1.0
    if not x_max > x_min:
        raise PreconditionError("sampling window must have x_max > x_min")
    nx = int(args.nx if args.nx is not None else 1001)
    if nx < 2:
        raise PreconditionError("nx must be at least 2")
    x = np.linspace(x_min, x_max, nx)
    u, v = sample_brio_many(sol, x / t)
    out = _out_dir(args)
    csv_path = os.path.join(out, "samples.csv")
    _write_csv(csv_path, ("x", "u", "v"), zip(x, u, v))
    sidecar = {
        "time": t,
        "carriers": [
            {"position": s.speed * t, "strength": s.strength(t),
             "speed": s.speed, "rate": s.rate, "constant": s.constant,
             "component": s.component}
            for s in sol.singular
        ],
    }
    side_path = os.path.join(out, "singular.json")
    with open(side_path, "w", encoding="utf-8") as f:
        json.dump(sidecar, f, indent=2)
        f.write("\n")
    print(csv_path)
    print(side_path)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    seed = int(args.seed if args.seed is not None else 0)
    kwargs = {}
    if args.tol_weak is not None:
        kwargs["tol_weak"] = _require_positive("tol_weak", args.tol_weak)
    if args.arclength:
        kwargs["arclength"] = True
    report = property_suite(seed, **kwargs)
    path = os.path.join(_out_dir(args), "report.json")
    _write_json(path, report, "report.schema.json")
    n_pass = sum(1 for c in report["checks"] if c["passed"])
    print(f"{n_pass}/{len(report['checks'])} checks passed ({path})")
    return 0 if n_pass == len(report["checks"]) else 2


def _cmd_fv_compare(args: argparse.Namespace) -> int:
    data = _riemann_data(args)
    fan = build_fan(lift(data.left), lift(data.right))
    x_min = float(args.x_min if args.x_min is not None else -5.0)
    x_max = float(args.x_max if args.x_max is not None else 5.0)
    T = _require_positive("final-time", args.final_time
                          if args.final_time is not None else 0.5)
    cfl = _require_positive("cfl", args.cfl if args.cfl is not None else 0.45)
    ladder = args.ladder if args.ladder is not None else "512,1024,2048,4096"
    if isinstance(ladder, str):
        ns = [int(p) for p in ladder.split(",")]
    else:
        ns = [int(p) for p in ladder]
    rows = []
    for n in ns:
        err = compare_fan_fv(fan, FvGrid(x_min, x_max, n, cfl, T))
        rows.append((float(n), err))
    path = os.path.join(_out_dir(args), "fv_compare.csv")
    _write_csv(path, ("n", "l1_error"), rows)
    print(path)
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; its keys override "
                     "command-line options (a warning is printed)")
    sub.add_argument("--out", help="output directory (default: "
                     f"${ENV_OUT} or the working directory)")


def _add_data_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--left", help="left state as u,v")
    sub.add_argument("--right", help="right state as u,v")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="briodelta",
        description="Exact delta-shock Riemann solver for a 2x2 model system",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="write the delta-solution JSON")
    _add_data_options(p)
    p.add_argument("--flip-speed", dest="flip_speed",
                   choices=("rh", "paper"))
    p.add_argument("--tol-root", dest="tol_root", type=float)
    p.add_argument("--tol-ode", dest="tol_ode", type=float)
    _add_common(p)

    p = sub.add_parser("curves", help="tabulate wave curves from a base state")
    p.add_argument("--base", help="base state as u,q")
    p.add_argument("--family", choices=tuple(_CURVE_KINDS))
    p.add_argument("--span", type=float, help="u-extent of each table "
                   "(default 2)")
    p.add_argument("--samples", type=int, help="rows per table (default 257)")
    _add_common(p)

    p = sub.add_parser("sample", help="sample the regular part on an x-grid")
    _add_data_options(p)
    p.add_argument("--flip-speed", dest="flip_speed",
                   choices=("rh", "paper"))
    p.add_argument("--time", type=float, help="sampling time (default 1)")
    p.add_argument("--x-min", dest="x_min", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--nx", type=int, help="grid points (default 1001)")
    _add_common(p)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol-weak", dest="tol_weak", type=float)
    p.add_argument("--arclength", action="store_true", default=None,
                   help="weight line terms by sqrt(1+c^2) (diagnostic; "
                   "the carried rates are calibrated to the unweighted form)")
    _add_common(p)

    p = sub.add_parser("fv-compare", help="finite-volume refinement table")
    _add_data_options(p)
    p.add_argument("--x-min", dest="x_min", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--final-time", dest="final_time", type=float)
    p.add_argument("--cfl", type=float)
    p.add_argument("--ladder", help="comma-separated cell counts "
                   "(default 512,1024,2048,4096)")
    _add_common(p)

    return parser


_HANDLERS = {
    "solve": _cmd_solve,
    "curves": _cmd_curves,
    "sample": _cmd_sample,
    "verify": _cmd_verify,
    "fv-compare": _cmd_fv_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        _apply_config(args, args.subcommand)
        return _HANDLERS[args.subcommand](args)
    except (BrioError, ValueError, OSError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
