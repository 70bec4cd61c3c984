r"""The g-function family and its exact identities.

.. math::

    g_m(z) = \int_0^\infty y^m e^{-y^2 - z/y}\,dy
           = \int_0^\infty x^{-(m+2)} e^{-1/x^2 - z x}\,dx,
    \qquad \operatorname{Re} z \ge 0,\ m = 0, 1, \ldots, M_{\max}.

Numerical evaluation splits the integral at ``y = s`` (``cfg.split_point``):
``[s, inf)`` is integrated directly, where the Gaussian factor gives fast
decay, and ``(0, s]`` is mapped by ``y = 1/x`` onto ``[1/s, inf)``, where the
essential singularity at ``y = 0`` turns into the damping ``exp(-Re(z) x)``.
On the imaginary axis that damping vanishes and the mapped piece is summed
over half-period cells of ``exp(i Im(z) x)``.

Polar arguments use ``z = r exp(-i theta)`` with ``0 <= theta <= pi/2``, so
``Re z >= 0`` and ``Im z <= 0``.  With this convention

.. math::

    \operatorname{Im} g_m = \int_0^\infty y^m e^{-y^2 - r\cos\theta/y}
                            \sin(r\sin\theta/y)\,dy

carries a plus sign in front of the sine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import (
    DEFAULT_CONFIG,
    DecayClass,
    EvalResult,
    Integrand,
    QuadratureConfig,
    integrate_interval,
    integrate_semi_infinite,
)

__all__ = [
    "M_MAX",
    "PolarArg",
    "direct_integrand",
    "g",
    "g_derivative",
    "g_gamma_special",
    "g_inverse_form",
    "g_polar_parts",
    "inverse_integrand",
    "ode_residual",
    "phi",
    "phi_direct",
    "phi_integrand",
    "recurrence_residual",
    "taylor_truncated",
]

M_MAX = 20

# Split of the x-form in g_inverse_form, kept away from 1/split_point so the
# two representations never share a panel layout.
_INVERSE_SPLIT = 2.0


@dataclass(frozen=True)
class PolarArg:
    """``z = r exp(-i theta)`` with ``r >= 0`` and ``0 <= theta <= pi/2``."""

    r: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError(f"r must be finite and >= 0, got {self.r!r}")
        if not (0.0 <= self.theta <= math.pi / 2):
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    def to_complex(self) -> complex:
        return complex(self.r * math.cos(self.theta), -self.r * math.sin(self.theta))


def _check_order(m: int, limit: int = M_MAX) -> int:
    if isinstance(m, bool) or int(m) != m:
        raise DomainError(f"order must be an integer, got {m!r}")
    m = int(m)
    if not 0 <= m <= limit:
        raise DomainError(f"order m={m} outside 0..{limit}")
    return m


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.real < 0:
        raise DomainError(f"Re z = {z.real!r} < 0: the integral diverges at y -> 0")
    return z


def _reduce(z: complex):
    """Real arguments stay real so the imaginary part is exactly zero."""
    return z.real if z.imag == 0 else z


def direct_integrand(k: int, z):
    """Vectorised ``y**k * exp(-y**2 - z/y)``; ``k`` may be negative."""
    z = _reduce(complex(z))
    at_zero = 1.0 if (z == 0 and k == 0) else 0.0

    def f(y):
        y = np.asarray(y, dtype=float)
        pos = y > 0
        ys = np.where(pos, y, 1.0)
        out = np.exp(k * np.log(ys) - ys * ys - z / ys)
        return np.where(pos, out, at_zero)

    return f


def inverse_integrand(k: int, z):
    """Vectorised ``x**-(k+2) * exp(-1/x**2 - z*x)``, zero at ``x = 0``."""
    z = _reduce(complex(z))

    def f(x):
        x = np.asarray(x, dtype=float)
        pos = x > 0
        xs = np.where(pos, x, 1.0)
        out = np.exp(-1.0 / (xs * xs) - z * xs - (k + 2) * np.log(xs))
        return np.where(pos, out, 0.0)

    return f


def _direct_envelope(k: int, re_z: float):
    return lambda y: math.exp(k * math.log(y) - y * y - re_z / y)


def _inverse_envelope(k: int, re_z: float):
    return lambda x: math.exp(-1.0 / (x * x) - re_z * x - (k + 2) * math.log(x))


def _head(k, z, func=None) -> Integrand:
    return Integrand(func or direct_integrand(k, z), DecayClass.GAUSSIAN_TAIL, rate=1.0,
                     envelope=_direct_envelope(k, z.real))


def _tail(k, z, func=None) -> Integrand:
    func = func or inverse_integrand(k, z)
    env = _inverse_envelope(k, z.real)
    if z.real > 0:
        return Integrand(func, DecayClass.EXPONENTIAL_TAIL, rate=z.real,
                         frequency=abs(z.imag), power=k + 2, envelope=env)
    return Integrand(func, DecayClass.BOUNDED_OSCILLATORY, frequency=abs(z.imag),
                     power=k + 2, envelope=env)


def _combine(pieces, cfg: QuadratureConfig) -> EvalResult:
    """Evaluate ``[(integrand, lower), ...]`` and sum, meeting ``cfg`` overall."""
    scale = 1.0
    for _ in range(3):
        sub = replace(cfg, abs_tol=0.5 * cfg.abs_tol * scale, rel_tol=cfg.rel_tol * scale)
        parts = [integrate_semi_infinite(f, lower, sub) for f, lower in pieces]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        if total.abs_error_estimate <= cfg.target(total.value):
            return total
        # Cancellation between pieces: tighten relative to the partial sizes.
        size = sum(abs(p.value) for p in parts)
        scale *= max(abs(total.value) / size, 1e-3) if size > 0 else 1e-3
    raise ConvergenceError(
        f"error estimate {total.abs_error_estimate:.3e} above target {cfg.target(total.value):.3e}")


def _g_any(k: int, z: complex, cfg: QuadratureConfig) -> EvalResult:
    """``int_0^inf y**k exp(-y**2 - z/y) dy`` for any integer ``k``."""
    if z == 0:
        if k < 0:
            raise DomainError(f"order {k} integral diverges at z = 0")
        f = Integrand(direct_integrand(k, 0.0), DecayClass.GAUSSIAN_TAIL, rate=1.0)
        return integrate_semi_infinite(f, 0.0, cfg)
    if z.real == 0 and k < 0:
        raise DomainError(f"order {k} integral diverges on Re z = 0")
    s = cfg.split_point
    return _combine([(_head(k, z), s), (_tail(k, z), 1.0 / s)], cfg)


def g(m: int, z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Evaluate ``g_m(z)`` by adaptive quadrature.

    Parameters
    ----------
    m : int
        Order, ``0 <= m <= M_MAX``.
    z : complex
        Argument with ``Re z >= 0``.
    cfg : QuadratureConfig

    Returns
    -------
    EvalResult
        ``value`` is exactly real when ``z`` is real.

    Raises
    ------
    DomainError
        ``Re z < 0`` or ``m`` out of range.
    ConvergenceError
        Accuracy target not met within the subdivision budget.

    Examples
    --------
    >>> round(g(1, 0).value.real, 12)
    0.5
    """
    return _g_any(_check_order(m), _as_complex(z), cfg)


def g_inverse_form(m: int, z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Evaluate ``g_m(z)`` from the ``y = 1/x`` representation alone."""
    m = _check_order(m)
    z = _as_complex(z)
    zr = _reduce(z)
    near = integrate_interval(inverse_integrand(m, zr), 0.0, _INVERSE_SPLIT,
                              replace(cfg, abs_tol=0.5 * cfg.abs_tol))
    far = _combine([(_tail(m, z), _INVERSE_SPLIT)], replace(cfg, abs_tol=0.5 * cfg.abs_tol))
    return near + far


def g_gamma_special(m: int) -> float:
    """Closed form ``g_m(0) = Gamma((m + 1)/2) / 2``, no quadrature.

    Odd orders give ``g_{2n+1}(0) = n!/2``; even orders use
    ``Gamma(n + 1/2) = (2n)! sqrt(pi) / (4**n n!)``.
    """
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise DomainError(f"order must be a non-negative integer, got {m!r}")
    m = int(m)
    if m % 2:
        return math.factorial((m - 1) // 2) / 2
    n = m // 2
    ratio = Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n))
    return float(ratio) * math.sqrt(math.pi) / 2


def phi_integrand(m: int, x: float):
    """Vectorised ``y**m exp(-y - x/sqrt(y))``."""
    def f(y):
        y = np.asarray(y, dtype=float)
        pos = y > 0
        ys = np.where(pos, y, 1.0)
        out = np.exp(m * np.log(ys) - ys - x / np.sqrt(ys))
        return np.where(pos, out, 1.0 if (m == 0 and x == 0) else 0.0)

    return f


def _check_phi_args(m: int, x: float):
    m = _check_order(m, (M_MAX - 1) // 2)
    x = float(x)
    if not (math.isfinite(x) and x >= 0):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    return m, x


def phi(m: int, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """``phi_m(x) = int_0^inf y**m exp(-y - x/sqrt(y)) dy`` as ``2 g_{2m+1}(x)``.

    The substitution ``y = w**2`` gives the identity.  ``m = 1`` is the
    transmitted-fraction integral of thermal-neutron absorption.
    """
    m, x = _check_phi_args(m, x)
    return g(2 * m + 1, x, replace(cfg, abs_tol=0.5 * cfg.abs_tol)).scaled(2.0)


def phi_direct(m: int, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """``phi_m(x)`` by direct quadrature of its own integrand."""
    m, x = _check_phi_args(m, x)
    f = Integrand(phi_integrand(m, x), DecayClass.EXPONENTIAL_TAIL, rate=1.0,
                  envelope=lambda y: y ** m * math.exp(-y))
    return integrate_semi_infinite(f, 0.0, cfg)


def g_derivative(m: int, z, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """``d^n g_m / dz^n = (-1)**n int_0^inf x**(n-m-2) exp(-1/x**2 - z x) dx``.

    For ``n <= m`` this is ``(-1)**n g_{m-n}(z)``.  For ``n > m`` the integral
    needs ``Re z > 0`` and grows without bound as ``z -> 0``.
    """
    m = _check_order(m)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"derivative order must be an integer >= 1, got {n!r}")
    n = int(n)
    z = _as_complex(z)
    if n > m and z.real == 0:
        raise DomainError(f"derivative {n} of g_{m} diverges for Re z = 0")
    return _g_any(m - n, z, cfg).scaled((-1) ** n)


def g_polar_parts(m: int, arg: PolarArg, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``(Re g_m, Im g_m)`` at ``z = r exp(-i theta)`` from two real integrals.

    Each part is integrated on its own, with ``cos(r sin(theta)/y)`` and
    ``sin(r sin(theta)/y)`` factors, rather than taken from the complex path.
    """
    m = _check_order(m)
    if not isinstance(arg, PolarArg):
        arg = PolarArg(*arg)
    if arg.r == 0:
        return g(m, 0.0, cfg).value.real, 0.0
    a = arg.r * math.cos(arg.theta)
    b = arg.r * math.sin(arg.theta)
    z = complex(a, -b)

    def head(trig):
        def f(y):
            y = np.asarray(y, dtype=float)
            pos = y > 0
            ys = np.where(pos, y, 1.0)
            out = np.exp(m * np.log(ys) - ys * ys - a / ys) * trig(b / ys)
            return np.where(pos, out, 0.0)
        return f

    def tail(trig):
        def f(x):
            x = np.asarray(x, dtype=float)
            pos = x > 0
            xs = np.where(pos, x, 1.0)
            out = np.exp(-1.0 / (xs * xs) - a * xs - (m + 2) * np.log(xs)) * trig(b * xs)
            return np.where(pos, out, 0.0)
        return f

    s = cfg.split_point
    parts = []
    for trig in (np.cos, np.sin):
        if trig is np.sin and b == 0:
            parts.append(0.0)
            continue
        res = _combine([(_head(m, z, head(trig)), s), (_tail(m, z, tail(trig)), 1.0 / s)], cfg)
        parts.append(res.value.real)
    return parts[0], parts[1]


def recurrence_residual(m: int, z, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``|2 g_m - (m-1) g_{m-2} - z g_{m-3}|``, zero up to quadrature error."""
    m = _check_order(m)
    if m < 3:
        raise DomainError("the three-term recurrence needs m >= 3")
    z = _as_complex(z)
    gm, gm2, gm3 = (g(k, z, cfg).value for k in (m, m - 2, m - 3))
    return abs(2 * gm - (m - 1) * gm2 - z * gm3)


def ode_residual(m: int, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``|x g''' - (m-1) g'' + 2 g|`` for ``g = g_m`` on the positive real axis."""
    m = _check_order(m)
    x = float(x)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"the differential equation is checked only at x > 0, got {x!r}")
    d3 = g_derivative(m, x, 3, cfg).value
    d2 = g_derivative(m, x, 2, cfg).value
    g0 = g(m, x, cfg).value
    return abs(x * d3 - (m - 1) * d2 + 2 * g0)


def taylor_truncated(m: int, z) -> complex:
    """Order-``m`` Taylor polynomial of ``g_m`` about ``z = 0``.

    Coefficients are ``(-1)**k g_{m-k}(0) / k!``; derivatives of order above
    ``m`` are infinite at the origin, so the expansion stops here.  Meant for
    ``|z| <= 0.1``.
    """
    m = _check_order(m)
    z = complex(z)
    terms = [(-z) ** k / math.factorial(k) * g_gamma_special(m - k) for k in range(m + 1)]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
