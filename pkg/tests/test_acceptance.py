"""Release acceptance suite: thirteen criteria, one PASS/FAIL line each.

Run under pytest (lines are printed live, even with output capture on) or
directly with ``python3 tests/test_acceptance.py``.  Tolerances are the
release tolerances; nothing here is loosened to make a criterion pass.
"""

import io
import math
import sys
from pathlib import Path

import numpy as np
import pytest

from gfunc.core import (
    M_MAX,
    PolarArg,
    g,
    g_derivative,
    g_gamma_special,
    g_inverse_form,
    ode_residual,
    phi,
    phi_direct,
    recurrence_residual,
)
from gfunc.oracle import oracle_g
from gfunc.rotor import (
    ResponseParams,
    RotorSpec,
    correlation_time_domain,
    dipole_correlation,
    g_kernel,
    g_kernel_direct,
    susceptibility_ratio,
    susceptibility_ratio_u_domain,
)
from gfunc.selftest import report, run_families
from gfunc.sweep import SweepSpec, format_csv, run_sweep

DATA = Path(__file__).parent / "data"
GRID_Z = [complex(a, b) for a in (0.0, 0.5, 1.0, 3.0) for b in (0.0, -1.0, -3.0)]
ORIGIN_SEQ = (1e-1, 1e-2, 1e-3)
FIG1 = SweepSpec("radial", 0.0, 8.0, 400, m=1, fixed=math.pi / 3)
FIG2 = SweepSpec("phase", 0.0, math.pi / 2, 200, m=1, fixed=3.0)


def gv(m, z):
    return g(m, z).value


def _worst(values):
    return max(values, default=0.0)


def c01_gamma_anchor():
    anchor = _worst(abs(gv(m, 0) - math.gamma((m + 1) / 2) / 2) for m in range(M_MAX + 1))
    odd = _worst(abs(gv(2 * n + 1, 0) - math.factorial(n) / 2) for n in range(6))
    special = _worst(abs(g_gamma_special(2 * n + 1) - math.factorial(n) / 2) for n in range(6))
    ok = anchor <= 1e-10 and odd <= 1e-10 and special <= 1e-10
    return ok, f"worst |g(m,0) - Gamma/2| = {anchor:.2e}, odd-order factorial {odd:.2e}"


def c02_representations():
    worst = _worst(abs(gv(m, z) - g_inverse_form(m, z).value)
                   for m in (0, 1, 2, 3, 5, 8) for z in GRID_Z)
    return worst <= 1e-9, f"72 points, worst difference {worst:.2e}"


def c03_recurrence():
    ratio = _worst(recurrence_residual(m, z) / (1e-9 * (1 + abs(gv(m, z))))
                   for m in (3, 4, 5, 8) for z in GRID_Z)
    return ratio <= 1.0, f"worst residual is {ratio:.2e} of its bound"


def c04_derivative():
    h = 1e-5
    worst = 0.0
    for m in (1, 2, 5):
        for z in (0.5, 1.0, 2.0, 1 - 1j):
            slope = (gv(m, z + h) - gv(m, z - h)) / (2 * h)
            worst = max(worst, abs(slope + gv(m - 1, z)) / abs(gv(m - 1, z)))
    return worst <= 1e-6, f"worst relative mismatch {worst:.2e}"


def c05_ode():
    worst = _worst(ode_residual(m, x) for m in (0, 3, 4) for x in (0.5, 1.0, 2.0))
    # Same quadrature-error scale the recurrence is held to.
    gap = _worst(abs(ode_residual(m, x) - recurrence_residual(m, x)) / (1e-9 * (1 + abs(gv(m, x))))
                 for m in (3, 4, 5, 8) for x in (0.5, 1.0, 2.0))
    return worst <= 1e-8 and gap <= 1.0, f"worst residual {worst:.2e}; ODE vs recurrence {gap:.2e} of bound"


def c06_origin_dichotomy():
    ok, notes = True, []
    for m in (1, 2):
        grow = [abs(g_derivative(m, x, m + 1).value) for x in ORIGIN_SEQ]
        ok &= grow[0] < grow[1] < grow[2]
        notes.append(f"m={m} n={m + 1}: {grow[0]:.3g} < {grow[1]:.3g} < {grow[2]:.3g}")
        for n in range(1, m + 1):
            vals = [abs(g_derivative(m, x, n).value) for x in ORIGIN_SEQ]
            ok &= max(vals) < 2 * min(vals)
    return ok, "; ".join(notes) + "; lower orders vary < 2x"


def c07_phi():
    worst = _worst(abs(phi_direct(m, x).value - phi(m, x).value)
                   for m in (0, 1, 2) for x in (0.0, 0.5, 1.0, 3.0))
    return worst <= 1e-10, f"worst |direct - 2 g_(2m+1)| = {worst:.2e}"


def c08_figures():
    fig1 = run_sweep(FIG1)
    re = [r.re for r in fig1 if r.re != 0]
    sign_change = any(a * b < 0 for a, b in zip(re, re[1:]))
    end = abs(complex(fig1[-1].re, fig1[-1].im))
    spot = _worst(abs(gv(1, PolarArg(r, math.pi / 3).to_complex())
                      - oracle_g(1, PolarArg(r, math.pi / 3).to_complex())) for r in (1.0, 3.0, 6.0))
    golden1 = format_csv(fig1) == (DATA / "fig1_radial.csv").read_text()
    golden2 = format_csv(run_sweep(FIG2)) == (DATA / "fig2_phase.csv").read_text()
    ok = sign_change and end < 1e-4 and spot <= 1e-10 and golden1 and golden2
    return ok, (f"sign change {sign_change}, |g_1| at r=8 is {end:.3e} (need < 1e-4), "
                f"oracle spot checks {spot:.1e}, goldens identical {golden1 and golden2}")


def c09_kernel():
    params = ResponseParams(beta=1.0, tau=2.0, omega=1.0)
    worst = 0.0
    for rotor in (RotorSpec(), RotorSpec(i1=0.5)):
        for theta in (0.0, math.pi / 6, math.pi / 3, math.pi / 2):
            for u in (0.1, 1.0, 5.0):
                direct = g_kernel_direct(theta, u, rotor, params).value
                worst = max(worst, abs(g_kernel(theta, u, rotor, params) - direct) / abs(direct))
    return worst <= 1e-8, f"worst relative difference {worst:.2e}"


def c10_correlation():
    worst = 0.0
    for ratio in (0.5, 1.0, 2.0):
        for beta in (0.5, 1.0, 2.0):
            rotor, params = RotorSpec(i1=1.0 / ratio), ResponseParams(beta=beta)
            worst = max(worst, abs(dipole_correlation(0.0, rotor, params).value - 1),
                        abs(correlation_time_domain(0.0, rotor, params) - 1))
    u = np.linspace(40.0, 60.0, 2001)
    mean = float(np.mean([dipole_correlation(x, RotorSpec(), ResponseParams()).value for x in u]))
    ok = worst <= 1e-8 and abs(mean - 1 / 3) <= 0.05
    return ok, f"|C(0) - 1| <= {worst:.1e}; plateau mean {mean:.4f}"


def c11_susceptibility_limits():
    sphere = RotorSpec()
    high = abs(susceptibility_ratio(sphere, ResponseParams(tau=1.0, omega=1e4)))
    real = max(abs(susceptibility_ratio(r, ResponseParams(tau=2.0)).imag)
               for r in (sphere, RotorSpec(i1=0.5)))
    static = susceptibility_ratio(sphere, ResponseParams(tau=1e3, omega=0.0))
    ok = high < 0.05 and real <= 1e-9 and abs(static - 2 / 3) < 0.05
    return ok, f"|ratio| at omega tau = 1e4: {high:.2e}; Im at omega=0: {real:.1e}; static {static.real:.5f}"


PATH_SETS = (
    (RotorSpec(), ResponseParams(beta=1.0, tau=1.0, omega=0.5)),
    (RotorSpec(i1=0.5), ResponseParams(beta=1.0, tau=2.0, omega=1.0)),
    (RotorSpec(i1=2.0), ResponseParams(beta=2.0, tau=0.5, omega=2.0)),
)


def c12_path_agreement():
    worst = 0.0
    for rotor, params in PATH_SETS:
        t_dom = susceptibility_ratio(rotor, params)
        worst = max(worst, abs(t_dom - susceptibility_ratio_u_domain(rotor, params)) / abs(t_dom))
    return worst <= 1e-6, f"worst relative difference {worst:.2e} over {len(PATH_SETS)} sets"


def c13_determinism():
    reports = []
    for _ in range(2):
        buf = io.StringIO()
        report(run_families(), buf)
        reports.append(buf.getvalue())
    chi = SweepSpec("chi_spectrum", 0.0, 20.0, 9, rotor=RotorSpec(i1=0.5), params=ResponseParams())
    sweeps_ok = True
    for spec in (FIG1, FIG2, chi):
        texts = {format_csv(run_sweep(spec, workers=w)) for w in (1, 1, 8)}
        sweeps_ok &= len(texts) == 1
    ok = reports[0] == reports[1] and sweeps_ok
    return ok, f"selftest reports identical {reports[0] == reports[1]}, sweeps identical {sweeps_ok}"


CRITERIA = [
    (1, "gamma anchor", c01_gamma_anchor),
    (2, "representation equivalence", c02_representations),
    (3, "recurrence", c03_recurrence),
    (4, "derivative relation", c04_derivative),
    (5, "differential equation", c05_ode),
    (6, "origin dichotomy", c06_origin_dichotomy),
    (7, "phi identity", c07_phi),
    (8, "figure reproduction", c08_figures),
    (9, "kernel reduction", c09_kernel),
    (10, "correlation normalization", c10_correlation),
    (11, "susceptibility limits", c11_susceptibility_limits),
    (12, "path agreement", c12_path_agreement),
    (13, "determinism", c13_determinism),
]


def _line(number, name, ok, detail):
    return f"criterion {number:2d} {'PASS' if ok else 'FAIL'} {name}: {detail}"


@pytest.mark.parametrize("number,name,check", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(number, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
