"""Command-line front end.

Exit codes: 0 success/pass, 1 property fail (or orbit/decomposition
failure), 2 usage or parse error, 3 domain/math error, 4 I/O error.

Every flag may also come from ``--config FILE``, a flat ``key=value`` file
(``#`` starts a comment; keys are flag names without dashes, with ``_`` or
``-``).  Flags given on the command line win.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import suite as suite_mod
from .dynamics import decompose, run_orbit
from .errors import (
    DomainError, InvalidMeanError, MonotonicityError, NoBracketError, ParseError, RangeError,
    SpecError,
)
from .means import eval_mean, make_mean, parse_mean_spec
from .numerics import DEFAULT_INSET, Interval
from .properties import DEFAULT_VERDICT_TOL, check_property, pointwise_defects

EXIT_FAIL, EXIT_USAGE, EXIT_MATH, EXIT_IO = 1, 2, 3, 4

DEFAULTS = {
    "iv": (0.0, 1.0),
    "inset": DEFAULT_INSET,
    "grid": 33,
    "tol": None,
    "seed": suite_mod.DEFAULT_SEED,
    "max_iter": 10_000,
    "format": "text",
}


class UsageError(Exception):
    pass


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONVERT = {
    "iv": lambda s: tuple(float(v) for v in s.replace(",", " ").split()),
    "inset": float, "grid": int, "tol": float, "seed": int, "max_iter": int,
    "x": float, "y": float, "v": float, "xi": float,
}


def _merge(args: argparse.Namespace) -> argparse.Namespace:
    config = read_config(args.config) if getattr(args, "config", None) else {}
    if "lo" in config or "hi" in config:
        config.setdefault("iv", f"{config.pop('lo', '')} {config.pop('hi', '')}")
    for key, value in config.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r} for this command")
        if getattr(args, key) is None:
            try:
                setattr(args, key, _CONVERT.get(key, str)(value))
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {value!r}") from exc
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def _interval(args) -> Interval:
    if len(args.iv) != 2:
        raise UsageError("--iv needs exactly two numbers")
    try:
        return Interval(args.iv[0], args.iv[1], args.inset)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _mean(args):
    _need(args, "mean")
    return make_mean(parse_mean_spec(args.mean), _interval(args))


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, newline="\n")


def cmd_eval(args) -> int:
    _need(args, "x", "y")
    m = _mean(args)
    start = time.perf_counter()
    value = eval_mean(m, args.x, args.y)
    elapsed = time.perf_counter() - start
    print(f"mean: {m}")
    print(f"value: {value:.6g}")
    print(f"time: {elapsed * 1e3:.6g} ms")
    if args.out:
        _write(args.out, f"x,y,value\n{args.x:.17g},{args.y:.17g},{value:.17g}\n")
    return 0


def cmd_check(args) -> int:
    _need(args, "property")
    m = _mean(args)
    tol = DEFAULT_VERDICT_TOL if args.tol is None else args.tol
    rep = check_property(m, args.property, args.grid, tol, phi=args.phi)
    sys.stdout.write(rep.to_text())
    if args.out:
        _write(args.out, rep.CSV_HEADER + "\n" + rep.to_csv_row() + "\n")
    return 0 if rep.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    _need(args, "property")
    m = _mean(args)
    header = "x,y,u,v,defect" if args.property == "bisymmetry" else "x,y,defect"
    lines = [header]
    for point, d in pointwise_defects(m, args.property, args.grid, args.phi):
        lines.append(",".join(f"{v:.17g}" for v in (*point, d)))
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_orbit(args) -> int:
    _need(args, "v", "xi")
    m = _mean(args)
    orbit = run_orbit(m, args.v, args.xi, args.max_iter, 1e-10 if args.tol is None else args.tol)
    summary = (f"mean: {m}\nv: {orbit.v:.6g}\nxi: {orbit.start:.6g}\niterations: {orbit.n_iter}\n"
               f"limit: {orbit.limit:.6g}\nconverged: {orbit.converged}\n"
               f"monotone: {orbit.monotone_dir}\nstop_reason: {orbit.stop_reason}\n"
               f"rl_condition: {orbit.rl_holds}\n")
    csv = orbit.CSV_HEADER + "\n" + "\n".join(orbit.csv_rows()) + "\n"
    if args.format == "csv" and not args.out:
        sys.stdout.write(csv)
    else:
        sys.stdout.write(summary)
        if args.out:
            _write(args.out, csv)
    return 0 if orbit.converged else EXIT_FAIL


def cmd_decompose(args) -> int:
    _need(args, "x", "y")
    m = _mean(args)
    d = decompose(m, args.x, args.y)
    csv = d.CSV_HEADER + "\n" + d.csv_row() + "\n"
    if args.format == "csv" and not args.out:
        sys.stdout.write(csv)
    else:
        sys.stdout.write(f"mean: {m}\nx: {d.x:.6g}\ny: {d.y:.6g}\nu0: {d.u0:.6g}\n"
                         f"v0: {d.v0:.6g}\nresidual_x: {d.residual_x:.6g}\n"
                         f"residual_y: {d.residual_y:.6g}\nmean_check: {d.mean_check:.6g}\n")
        if args.out:
            _write(args.out, csv)
    return 0


def cmd_suite(args) -> int:
    cfg = suite_mod.SuiteConfig(seed=args.seed, tol=args.tol)
    results = suite_mod.run_suite(cfg)
    sys.stdout.write(suite_mod.render_text(results))
    if args.out:
        _write(args.out, suite_mod.CSV_HEADER + "\n" + "\n".join(suite_mod.csv_rows(results)) + "\n")
    return 0 if all(r.passed for r in results) else EXIT_FAIL


def _grid(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mean=True):
        p.add_argument("--config", help="key=value file supplying defaults for any flag")
        if mean:
            p.add_argument("--mean", help='mean spec, e.g. \'qa(phi="log(x)")\'')
            p.add_argument("--iv", nargs=2, type=float, metavar=("LO", "HI"),
                           help="open interval (default 0 1)")
            p.add_argument("--inset", type=float, help="relative inset of the working interval")
            p.add_argument("--grid", type=_grid, help="grid points per axis (default 33)")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--format", choices=("text", "csv"))

    p = sub.add_parser("eval", help="evaluate a mean at one point")
    common(p)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.set_defaults(func=cmd_eval)

    for name, func, text in (("check", cmd_check, "grid maximum of a defect, with verdict"),
                             ("sweep", cmd_sweep, "pointwise defects on the grid as CSV")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--property", choices=("balancing", "symmetry", "bisymmetry", "iqa",
                                              "mean-axiom", "strictness"))
        p.add_argument("--phi", help="generator for the iqa property")
        p.set_defaults(func=func)

    p = sub.add_parser("orbit", help="iterate psi_v from xi")
    common(p)
    p.add_argument("--v", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("decompose", help="find (u0, v0) with R_v0(u0)=x, L_v0(u0)=y")
    common(p)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("suite", help="run the full verification battery")
    common(p, mean=False)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge(args)
        if getattr(args, "grid", None) is not None and args.grid < 2:
            raise UsageError("grid must be at least 2")
        return args.func(args)
    except (UsageError, ParseError, SpecError) as exc:
        print(f"meanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, (InvalidMeanError, MonotonicityError, DomainError, RangeError)):
            if isinstance(exc, NoBracketError) and args.command == "decompose":
                print(f"meanlab: decomposition failed: {exc}", file=sys.stderr)
                return EXIT_FAIL
            if isinstance(exc, RangeError) and args.command == "orbit":
                print(f"meanlab: orbit failed: {exc}", file=sys.stderr)
                return EXIT_FAIL
            print(f"meanlab: math error: {exc}", file=sys.stderr)
            return EXIT_MATH
        print(f"meanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"meanlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
