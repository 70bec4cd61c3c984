"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 invalid input or domain error,
3 convergence failure, 4 I/O failure.  Data goes to stdout, diagnostics to
stderr.  ``$GFN_TOL`` sets both tolerances; ``--tol`` overrides it.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .core import g
from .errors import ConvergenceError, GFunctionError
from .quadrature import QuadratureConfig
from .selftest import report, run_families
from .sweep import (
    SweepIOError,
    parse_config,
    run_sweep,
    spec_from_values,
    write_records,
)

EXIT_OK, EXIT_SELFTEST, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _config(args) -> QuadratureConfig:
    tol = getattr(args, "tol", None)
    return QuadratureConfig.from_env(abs_tol=tol, rel_tol=tol)


def cmd_eval(args) -> int:
    res = g(args.m, complex(args.re, args.im), _config(args))
    if args.json:
        print(json.dumps({"re": res.value.real, "im": res.value.imag,
                          "err": res.abs_error_estimate,
                          "subdivisions": res.subdivisions_used}))
    else:
        print(_fmt(res.value.real), _fmt(res.value.imag), _fmt(res.abs_error_estimate))
    return EXIT_OK


_FLAG_KEYS = {"m": "m", "theta": "theta", "r": "r", "lo": "lo", "hi": "hi", "steps": "steps",
              "i1": "i1", "i3": "i3", "beta": "beta", "tau": "tau", "dipole": "dipole",
              "omega_lo": "omega-lo", "omega_hi": "omega-hi"}


def _sweep(args, kind: str) -> int:
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_config(fh.read(), args.config))
    for attr, key in _FLAG_KEYS.items():
        if getattr(args, attr, None) is not None:
            values[key] = getattr(args, attr)
    values["kind"] = kind
    spec = spec_from_values(values)
    records = run_sweep(spec, _config(args), workers=args.workers)
    write_records(records, args.out)
    print(args.out, len(records))
    return EXIT_OK


def cmd_selftest(args) -> int:
    ok = report(run_families(_config(args)), sys.stdout)
    return EXIT_OK if ok else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfunc", description="Evaluate and sweep the g-function.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=_finite_float, help="absolute and relative tolerance")

    p = sub.add_parser("eval", help="evaluate g_m(z) at one point")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--re", type=_finite_float, required=True)
    p.add_argument("--im", type=_finite_float, default=0.0)
    p.add_argument("--json", action="store_true")
    common(p)
    p.set_defaults(func=cmd_eval)

    def sweep_flags(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--lo", type=_finite_float)
        p.add_argument("--hi", type=_finite_float)
        p.add_argument("--steps", type=int)
        p.add_argument("--out", required=True)
        p.add_argument("--workers", type=int, default=1)
        common(p)

    p = sub.add_parser("sweep-r", help="radial sweep of g_m(r exp(-i theta))")
    p.add_argument("--m", type=int)
    p.add_argument("--theta", type=_finite_float, help="radians")
    sweep_flags(p)
    p.set_defaults(func=lambda a: _sweep(a, "radial"))

    p = sub.add_parser("sweep-theta", help="phase sweep of g_m(r exp(-i theta))")
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=_finite_float)
    sweep_flags(p)
    p.set_defaults(func=lambda a: _sweep(a, "phase"))

    p = sub.add_parser("chi", help="susceptibility spectrum of a symmetric top")
    for name in ("--i1", "--i3", "--beta", "--tau", "--dipole", "--omega-lo", "--omega-hi"):
        p.add_argument(name, type=_finite_float)
    sweep_flags(p)
    p.set_defaults(func=lambda a: _sweep(a, "chi_spectrum"))

    p = sub.add_parser("selftest", help="check every identity on its grid")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"gfunc: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (SweepIOError, OSError) as exc:
        print(f"gfunc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GFunctionError, ValueError) as exc:
        print(f"gfunc: invalid input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
