"""Command-line interface: compute, verify, werner and landscape subcommands."""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import measure
from .closed_form import CASES, discord_closed_form, discord_werner_ghz
from .discord import OptimizerOptions, discord_numeric
from .oracle import OracleOptions, oracle_discord
from .qmat import InvalidStateError
from .states import build_state, build_werner_ghz, load_params, require_valid

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_STATE = 2
EXIT_NO_CASE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which collides with the invalid-state code
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _round(obj, digits):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, digits) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _round(obj.item(), digits)
    return obj


def _emit(obj, digits, out):
    json.dump(_round(obj, digits), out, indent=2)
    out.write("\n")


def _write_csv(header, rows, digits, path, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{x:.{digits}g}" for x in row])
    if path is None:
        out.write(buf.getvalue())
    else:
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())


def _grid_opts(n, weighting):
    if n is None:
        return OptimizerOptions(weighting=weighting)
    return OptimizerOptions(grid_theta=n, grid_phi=max(1, n // 2), weighting=weighting)


def _oracle_opts(n, weighting, conditional_b=False):
    if n is None:
        return OracleOptions(conditional_b=conditional_b, weighting=weighting)
    return OracleOptions(
        grid_theta=n, grid_phi=max(1, n // 2), conditional_b=conditional_b, weighting=weighting
    )


def _vector(text):
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}") from exc
    if v.shape != (3,) or not np.linalg.norm(v) > 0:
        raise UsageError(f"expected a nonzero 3-vector x,y,z, got {text!r}")
    return v / np.linalg.norm(v)


def fibonacci_sphere(n):
    """n nearly uniform points on the unit sphere."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    rho = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def cmd_compute(args, out):
    p = load_params(args.input)
    opts = _grid_opts(args.grid, args.weighting)
    if args.method == "numeric":
        res = discord_numeric(p, opts)
    else:
        res = discord_closed_form(
            p, case=args.case, weighting=args.weighting, verify=args.method == "auto", opts=opts
        )
        if res is None:
            if args.method == "closed":
                print("no closed-form case matches these parameters", file=sys.stderr)
                return EXIT_NO_CASE
            res = discord_numeric(p, opts)
    _emit(res.as_dict(), args.precision, out)
    return EXIT_OK


def cmd_verify(args, out):
    p = load_params(args.input)
    closed = discord_closed_form(p, case=args.case, weighting=args.weighting)
    numeric = discord_numeric(p, _grid_opts(args.grid, args.weighting))
    oracle = oracle_discord(
        build_state(p), _oracle_opts(args.grid, args.weighting, args.conditional_b)
    )
    values = {
        "closed": None if closed is None else closed.q,
        "numeric": numeric.q,
        "oracle": oracle.q,
    }
    names = list(values)
    deltas = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if values[a] is not None and values[b] is not None:
                deltas[f"{a}-{b}"] = abs(values[a] - values[b])
    report = {
        "case": None if closed is None else closed.case,
        "weighting": args.weighting,
        "conditional_b": args.conditional_b,
        **values,
        "deltas": deltas,
    }
    _emit(report, args.precision, out)
    return EXIT_OK


def cmd_werner(args, out):
    if args.steps < 1 or not 0.0 <= args.c_min <= args.c_max <= 1.0:
        raise UsageError("need 0 <= c-min <= c-max <= 1 and steps >= 1")
    cs = np.linspace(args.c_min, args.c_max, args.steps)
    opts = _oracle_opts(args.grid, "standard")
    rows = [
        (float(c), discord_werner_ghz(float(c)), oracle_discord(build_werner_ghz(float(c)), opts).q)
        for c in cs
    ]
    _write_csv(["c", "discord_closed", "discord_numeric"], rows, args.precision, args.output, out)
    return EXIT_OK


def cmd_landscape(args, out):
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    if args.which == "F" and args.zA is None:
        raise UsageError("--which F requires --zA")
    p = load_params(args.input)
    require_valid(build_state(p), p)
    pts = fibonacci_sphere(args.samples)
    if args.which == "G":
        values = measure.objective_g(p, pts)
    else:
        za = np.broadcast_to(_vector(args.zA), pts.shape)
        values = measure.objective_f(p, za, pts, args.weighting)
    rows = [(*z, float(v)) for z, v in zip(pts, np.asarray(values))]
    _write_csv(["z1", "z2", "z3", "value"], rows, args.precision, args.output, out)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="tridiscord", description="Tripartite quantum discord of three-qubit states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("-i", "--input", required=True, help="parameter file (JSON)")
        sp.add_argument("--grid", type=int, default=None, help="polar grid points per sphere")
        sp.add_argument("--precision", type=int, default=6, help="significant digits")
        sp.add_argument("--weighting", choices=measure.WEIGHTINGS, default="standard")

    sp = sub.add_parser("compute", help="discord of a parameter file")
    common(sp)
    sp.add_argument("--method", choices=("auto", "closed", "numeric"), default="auto")
    sp.add_argument("--case", choices=CASES, default=None, help="force a closed-form case")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify", help="compare closed form, optimizer and oracle")
    common(sp)
    sp.add_argument("--case", choices=CASES, default=None, help="force a closed-form case")
    sp.add_argument("--conditional-b", action="store_true", help="let B's axis depend on A's outcome")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("werner", help="Werner-GHZ discord curve as CSV")
    common(sp, with_input=False)
    sp.add_argument("--c-min", type=float, default=0.0)
    sp.add_argument("--c-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=11)
    sp.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_werner)

    sp = sub.add_parser("landscape", help="G or F sampled over the unit sphere as CSV")
    common(sp)
    sp.add_argument("--which", choices=("G", "F"), required=True)
    sp.add_argument("--zA", default=None, help="A's measurement axis x,y,z (required for F)")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_landscape)
    return parser


def run(argv, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 1 or (args.grid is not None and args.grid < 2):
            raise UsageError("precision must be >= 1 and grid >= 2")
        return args.func(args, out)
    except SystemExit as exc:  # --help
        return exc.code or EXIT_OK
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InvalidStateError as exc:
        print(f"invalid state: min eigenvalue {exc.min_eigenvalue:.6g}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))
