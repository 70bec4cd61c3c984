"""Identity checks run by ``gfunc selftest``.

Every family evaluates one exact identity over a fixed grid and reports the
worst residual.  Output depends only on the inputs, so two runs produce the
same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from .core import (
    M_MAX,
    PolarArg,
    g,
    g_gamma_special,
    g_inverse_form,
    g_polar_parts,
    ode_residual,
    recurrence_residual,
)
from .errors import GFunctionError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

GRID_RE = (0.0, 0.5, 1.0, 3.0)
GRID_IM = (0.0, -1.0, -3.0)
GRID_Z = tuple(complex(a, b) for a in GRID_RE for b in GRID_IM)
REPRESENTATION_ORDERS = (0, 1, 2, 3, 5, 8)
RECURRENCE_ORDERS = (3, 4, 5, 8)
DERIVATIVE_ORDERS = (1, 2, 5)
DERIVATIVE_POINTS = (0.5, 1.0, 2.0, 1 - 1j)
ODE_ORDERS = (0, 3, 4)
ODE_POINTS = (0.5, 1.0, 2.0)
POLAR_R = (0.5, 1.0, 3.0, 6.0)
POLAR_THETA = (0.0, math.pi / 6, math.pi / 3, math.pi / 2)
FD_STEP = 1e-5


@dataclass
class FamilyResult:
    name: str
    checks: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _family(name: str, cases: Iterable, residual: Callable, bound: Callable) -> FamilyResult:
    out = FamilyResult(name)
    for case in cases:
        out.checks += 1
        try:
            res = residual(*case)
        except GFunctionError as exc:
            out.failures.append((case, f"{type(exc).__name__}: {exc}"))
            continue
        out.worst = max(out.worst, res)
        if not res <= bound(*case):
            out.failures.append((case, f"residual {res:.3e} > {bound(*case):.3e}"))
    return out


def run_families(cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[FamilyResult]:
    def gv(m, z):
        return g(m, z, cfg).value

    def fd_residual(m, z):
        slope = (gv(m, z + FD_STEP) - gv(m, z - FD_STEP)) / (2 * FD_STEP)
        return abs(slope + gv(m - 1, z)) / abs(gv(m - 1, z))

    def polar_residual(m, r, theta):
        arg = PolarArg(r, theta)
        re, im = g_polar_parts(m, arg, cfg)
        ref = gv(m, arg.to_complex())
        return max(abs(re - ref.real), abs(im - ref.imag))

    return [
        _family("gamma-anchor", [(m,) for m in range(M_MAX + 1)],
                lambda m: abs(gv(m, 0) - g_gamma_special(m)), lambda m: 1e-10),
        _family("odd-factorial", [(n,) for n in range(6)],
                lambda n: abs(gv(2 * n + 1, 0) - math.factorial(n) / 2), lambda n: 1e-10),
        _family("representation", [(m, z) for m in REPRESENTATION_ORDERS for z in GRID_Z],
                lambda m, z: abs(gv(m, z) - g_inverse_form(m, z, cfg).value), lambda m, z: 1e-9),
        _family("recurrence", [(m, z) for m in RECURRENCE_ORDERS for z in GRID_Z],
                lambda m, z: recurrence_residual(m, z, cfg),
                lambda m, z: 1e-9 * (1 + abs(gv(m, z)))),
        _family("derivative", [(m, z) for m in DERIVATIVE_ORDERS for z in DERIVATIVE_POINTS],
                fd_residual, lambda m, z: 1e-6),
        _family("ode", [(m, x) for m in ODE_ORDERS for x in ODE_POINTS],
                lambda m, x: ode_residual(m, x, cfg), lambda m, x: 1e-8),
        _family("polar", [(1, r, t) for r in POLAR_R for t in POLAR_THETA],
                polar_residual, lambda m, r, t: 1e-8),
        _family("conjugate", [(m, z) for m in (0, 1, 3) for z in GRID_Z if z.imag],
                lambda m, z: abs(gv(m, z.conjugate()) - gv(m, z).conjugate()),
                lambda m, z: 1e-12),
    ]


def report(results: list[FamilyResult], out: TextIO) -> bool:
    ok = True
    for fam in results:
        status = "PASS" if fam.passed else "FAIL"
        out.write(f"{status} {fam.name}: {fam.checks} checks, worst residual {fam.worst:.3e}\n")
        for case, why in fam.failures:
            ok = False
            out.write(f"  failed at {case!r}: {why}\n")
    out.write("selftest: " + ("all identities hold" if ok else "FAILED") + "\n")
    return ok
