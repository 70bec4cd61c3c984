"""Regenerate the pinned figure sweeps under tests/data.

Each sweep is produced by the adaptive engine (what the CLI writes) and every
point is checked against the composite-Simpson oracle before the file is
written; a disagreement above 1e-10 aborts without touching the goldens.

    python scripts/regen_goldens.py
"""

import math
import sys
from pathlib import Path

from gfunc.core import PolarArg
from gfunc.oracle import oracle_g
from gfunc.sweep import SweepSpec, grid, run_sweep, write_csv

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
TOL = 1e-10

GOLDENS = {
    "fig1_radial.csv": SweepSpec("radial", 0.0, 8.0, 400, m=1, fixed=math.pi / 3),
    "fig2_phase.csv": SweepSpec("phase", 0.0, math.pi / 2, 200, m=1, fixed=3.0),
}


def _z(spec, x):
    if spec.kind == "radial":
        return PolarArg(x, spec.fixed).to_complex()
    return PolarArg(spec.fixed, min(x, math.pi / 2)).to_complex()


def main() -> int:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, spec in GOLDENS.items():
        records = run_sweep(spec)
        worst = 0.0
        for x, rec in zip(grid(spec), records):
            ref = oracle_g(spec.m, _z(spec, x))
            diff = abs(complex(rec.re, rec.im) - ref)
            worst = max(worst, diff)
            if diff > TOL:
                print(f"{name}: engine and oracle differ by {diff:.3e} at {x!r}", file=sys.stderr)
                return 1
        write_csv(records, DATA / name)
        print(f"{name}: {len(records)} points, worst oracle difference {worst:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
