"""Brute-force reference integrator.

Composite Simpson on an explicitly truncated range, halving the step until two
successive refinements agree.  It is slow on purpose and shares nothing with
the adaptive engine beyond the :class:`~gfunc.quadrature.Integrand` container;
tests and the golden-file generator use it to check the engine.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import ConvergenceError
from .quadrature import DecayClass, Integrand, QuadratureConfig

__all__ = ["oracle_cutoff", "oracle_g", "oracle_integrate"]

_TAIL_TOL = 1e-14
_MAX_CUTOFF = 1e6
_EVAL_CHUNK = 1 << 20


def _sum(f, x0: float, h: float, idx: np.ndarray) -> complex:
    total = 0j
    for start in range(0, len(idx), _EVAL_CHUNK):
        chunk = f(x0 + h * idx[start:start + _EVAL_CHUNK])
        total += complex(np.sum(chunk))
    return total


def oracle_cutoff(f: Integrand, lower: float) -> float:
    """Truncation point beyond which the tail is below 1e-14.

    The bound is built from the sampled maximum of ``|f|`` on ``[X, 2X]``
    and the declared decay class, doubling ``X`` until it holds.
    """
    x = lower + 1.0
    while x < _MAX_CUTOFF:
        peak = float(np.max(np.abs(f.func(np.linspace(x, 2.0 * x, 513)))))
        if f.decay is DecayClass.BOUNDED_OSCILLATORY and f.frequency > 0:
            tail = 2.0 * peak / f.frequency
        elif f.decay is DecayClass.EXPONENTIAL_TAIL and f.rate > 0:
            tail = peak * (x + 2.0 / f.rate)
        else:
            tail = peak * x
        if tail < _TAIL_TOL:
            return 2.0 * x
        x *= 2.0
    raise ConvergenceError(f"tail of integrand does not fall below {_TAIL_TOL} before x={_MAX_CUTOFF}")


def oracle_integrate(f: Integrand, lower: float, cfg: Optional[QuadratureConfig] = None, *,
                     upper: Optional[float] = None, tol: float = 1e-12,
                     start_intervals: int = 512, max_doublings: int = 16) -> complex:
    """Composite Simpson estimate of the integral of ``f`` from ``lower``.

    Parameters
    ----------
    f : Integrand
        Vectorised integrand; its decay class fixes the truncation rule.
    lower : float
        Lower limit.
    cfg : QuadratureConfig, optional
        Only ``tail_cutoff_factor`` is read; it stretches the truncated range.
    upper : float, optional
        Explicit finite upper limit.  When omitted, :func:`oracle_cutoff`
        supplies one.
    tol : float
        Stop once successive Simpson sums differ by less than
        ``max(tol, 16 eps |S|)``.
    """
    if upper is None:
        upper = oracle_cutoff(f, lower)
        if cfg is not None:
            upper = lower + (upper - lower) * cfg.tail_cutoff_factor
    n = start_intervals
    h = (upper - lower) / n
    ends = f.func(np.array([lower, upper], dtype=float))
    trap = h * (_sum(f.func, lower, h, np.arange(1, n)) + 0.5 * complex(np.sum(ends)))
    previous = None
    for _ in range(max_doublings):
        h *= 0.5
        n *= 2
        refined = 0.5 * trap + h * _sum(f.func, lower, h, np.arange(1, n, 2, dtype=float))
        simpson = (4.0 * refined - trap) / 3.0
        trap = refined
        if previous is not None and abs(simpson - previous) <= max(tol, 16 * np.finfo(float).eps * abs(simpson)):
            return simpson
        previous = simpson
    raise ConvergenceError(f"Simpson refinement did not settle after {n} intervals")


def oracle_g(m: int, z: complex, *, tol: float = 1e-12) -> complex:
    """Reference ``g_m(z)`` from :func:`oracle_integrate`.

    ``z = 0`` uses the direct form ``y**m exp(-y**2)``.  Otherwise the inverted
    form ``x**-(m+2) exp(-1/x**2 - z x)`` is used, treated as exponentially
    damped when ``Re z`` is appreciable and as a bounded oscillation when it is
    not (the latter needs ``m >= 1`` for a reachable truncation point).
    """
    z = complex(z)
    if z == 0:
        def direct(y):
            return np.exp(m * np.log(np.where(y > 0, y, 1.0)) - y * y) * np.where(y > 0, 1.0, float(m == 0))
        return oracle_integrate(Integrand(direct, DecayClass.GAUSSIAN_TAIL, rate=1.0), 0.0, tol=tol)

    zz = z.real if z.imag == 0 else z

    def inverted(x):
        xs = np.where(x > 0, x, 1.0)
        return np.where(x > 0, np.exp(-1.0 / (xs * xs) - zz * xs - (m + 2) * np.log(xs)), 0.0)

    if z.imag == 0 or z.real >= 0.01 * abs(z.imag):
        f = Integrand(inverted, DecayClass.EXPONENTIAL_TAIL, rate=z.real)
    else:
        f = Integrand(inverted, DecayClass.BOUNDED_OSCILLATORY, frequency=abs(z.imag))
    return oracle_integrate(f, 0.0, tol=tol)
