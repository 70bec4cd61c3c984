r"""Dielectric response of a gas of rigid symmetric-top polar molecules.

Reduced units throughout: moments of inertia in units of ``I3``, ``beta`` in
units of ``1/(k_B T)``.  The dipole lies along the symmetry axis; ``theta`` is
the tilt of that axis away from the conserved angular momentum ``L``.

For a symmetric top (``I1 == I2``) the kinetic energy is
``f(theta) L**2 / (2 I3)`` with ``f = (I3/I1) sin^2 theta + cos^2 theta``,
and free motion is uniform precession of the symmetry axis about ``L`` at
rate ``L/I1``.  In the dimensionless time ``u = L t / I3``

.. math::

    \cos\gamma(\theta, u) = \cos^2\theta + \sin^2\theta\,\cos\!\left(\frac{I_3}{I_1}u\right).

The ensemble weight over ``L`` is ``L exp(-beta f L^2 / (2 I3)) dL`` and the
angular measure ``sin(theta) dtheta dpsi``.  The psi integral is trivial for
a symmetric top and collapses to a factor ``2 pi``; the theta integral uses
64-point Gauss-Legendre in ``cos(theta)``.

Two routes to the susceptibility ratio

.. math::

    \frac{\chi(\omega + i/\tau)}{\chi(0)} = 1 + i s \int_0^\infty e^{i s t} C(t)\,dt,
    \qquad s = \omega + i/\tau,

are provided.  :func:`susceptibility_ratio` works in physical time, with the
``L`` average of ``cos(L t / I1)`` in closed form through Dawson's integral.
:func:`susceptibility_ratio_u_domain` substitutes ``t = I3 u / L`` per
molecule; the Jacobian ``dt = (I3/L) du`` turns the ``L`` integral into
``I3 a^{-1/2} g_0(z)`` (see :func:`reconciled_kernel`), while the literal
``L``-weighted kernel is ``a^{-1} g_1(z)`` (see :func:`g_kernel`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import dawsn

from .core import g
from .errors import DomainError
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
    "ANGULAR_ORDER",
    "CorrelationPoint",
    "ResponseParams",
    "RotorSpec",
    "TIME_CUTOFF",
    "angular_factor",
    "correlation_time_domain",
    "cos_gamma",
    "dipole_correlation",
    "g_kernel",
    "g_kernel_direct",
    "partition_normalizer",
    "reconciled_kernel",
    "rotational_energy",
    "susceptibility",
    "susceptibility_ratio",
    "susceptibility_ratio_u_domain",
    "susceptibility_u_domain",
]

ANGULAR_ORDER = 64
# Time integrals stop at TIME_CUTOFF * tau; the dropped tail is below exp(-40).
TIME_CUTOFF = 40.0

_COS_NODES, _COS_WEIGHTS = np.polynomial.legendre.leggauss(ANGULAR_ORDER)
_THETA_NODES = np.arccos(_COS_NODES)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class RotorSpec:
    """Symmetric top: ``I1 == I2`` is implied, only ``i1`` and ``i3`` are kept."""

    i1: float = 1.0
    i3: float = 1.0
    dipole: float = 1.0

    def __post_init__(self):
        for name in ("i1", "i3", "dipole"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    @property
    def ratio(self) -> float:
        """``I3 / I1``."""
        return self.i3 / self.i1


@dataclass(frozen=True)
class ResponseParams:
    beta: float = 1.0
    tau: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", _positive("beta", self.beta))
        object.__setattr__(self, "tau", _positive("tau", self.tau))
        omega = float(self.omega)
        if not (math.isfinite(omega) and omega >= 0):
            raise DomainError(f"omega must be finite and >= 0, got {omega!r}")
        object.__setattr__(self, "omega", omega)

    @property
    def damping(self) -> complex:
        """``1/tau - i omega``; real when ``omega == 0``."""
        return complex(1.0 / self.tau, -self.omega)


@dataclass(frozen=True)
class CorrelationPoint:
    u: float
    value: float


def angular_factor(theta, psi, rotor: RotorSpec):
    """``f(theta, psi)`` relating rotational energy to ``L**2 / (2 I3)``.

    Written for general ``I1, I2`` with ``I2 = I1``, so ``psi`` drops out.
    """
    s2 = np.sin(theta) ** 2
    i2 = rotor.i1
    f = (rotor.i3 / rotor.i1) * s2 * np.sin(psi) ** 2 + (rotor.i3 / i2) * s2 * np.cos(psi) ** 2 \
        + np.cos(theta) ** 2
    return float(f) if np.ndim(f) == 0 else f


def rotational_energy(L, theta, psi, rotor: RotorSpec):
    """``f(theta, psi) L**2 / (2 I3)``; the translational term is not included."""
    return angular_factor(theta, psi, rotor) * np.square(L) / (2.0 * rotor.i3)


def cos_gamma(theta, u, rotor: RotorSpec):
    """Cosine of the angle the dipole has turned through after time ``u``."""
    c2 = np.cos(theta) ** 2
    val = c2 + (1.0 - c2) * np.cos(rotor.ratio * np.asarray(u))
    return float(val) if np.ndim(val) == 0 else val


def _gauss_width(theta, rotor, params) -> float:
    """``a = beta f / (2 I3)`` of the Boltzmann factor ``exp(-a L^2)``."""
    return params.beta * angular_factor(theta, 0.0, rotor) / (2.0 * rotor.i3)


def _kernel_argument(a: float, u: float, rotor, params) -> complex:
    z = params.damping * rotor.i3 * float(u) * math.sqrt(a)
    return z.real if z.imag == 0 else z


def g_kernel(theta: float, u: float, rotor: RotorSpec, params: ResponseParams,
             cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``int_0^inf L exp(-a L^2 - (1/tau - i omega) I3 u / L) dL`` via ``g_1``.

    With ``L = y / sqrt(a)`` this is ``g_1(z) / a`` where
    ``z = (1/tau - i omega) u sqrt(beta f I3 / 2)``; ``Re z >= 0`` and
    ``Im z <= 0``.
    """
    if u < 0:
        raise DomainError(f"u must be >= 0, got {u!r}")
    a = _gauss_width(theta, rotor, params)
    return g(1, _kernel_argument(a, u, rotor, params), cfg).value / a


def reconciled_kernel(theta: float, u: float, rotor: RotorSpec, params: ResponseParams,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``I3 int_0^inf exp(-a L^2 - (1/tau - i omega) I3 u / L) dL = I3 g_0(z) / sqrt(a)``.

    The ``L`` weight of :func:`g_kernel` times the Jacobian ``I3 / L`` of
    ``t = I3 u / L``; this is the kernel whose ``u`` integral reproduces the
    physical-time susceptibility.
    """
    if u < 0:
        raise DomainError(f"u must be >= 0, got {u!r}")
    a = _gauss_width(theta, rotor, params)
    return rotor.i3 * g(0, _kernel_argument(a, u, rotor, params), cfg).value / math.sqrt(a)


def g_kernel_direct(theta: float, u: float, rotor: RotorSpec, params: ResponseParams,
                    cfg: QuadratureConfig = DEFAULT_CONFIG, *, power: int = 1) -> EvalResult:
    """The kernel integral taken directly in ``L``, weight ``L**power``."""
    a = _gauss_width(theta, rotor, params)
    b = params.damping * rotor.i3 * float(u)
    b = b.real if b.imag == 0 else b

    def f(L):
        L = np.asarray(L, dtype=float)
        pos = L > 0
        Ls = np.where(pos, L, 1.0)
        out = np.exp(power * np.log(Ls) - a * Ls * Ls - b / Ls)
        return np.where(pos, out, 1.0 if (power == 0 and b == 0) else 0.0)

    env = lambda L: L ** power * math.exp(-a * L * L)  # noqa: E731
    return integrate_semi_infinite(Integrand(f, DecayClass.GAUSSIAN_TAIL, rate=a, envelope=env),
                                   0.0, cfg)


def _angular_weights(rotor: RotorSpec, params: ResponseParams) -> np.ndarray:
    """``2 pi w_j / (2 a_j)``: Gauss-Legendre weight times the closed-form L integral."""
    f = angular_factor(_THETA_NODES, 0.0, rotor)
    return 2.0 * math.pi * _COS_WEIGHTS * rotor.i3 / (params.beta * f)


def partition_normalizer(rotor: RotorSpec, params: ResponseParams) -> float:
    """``Z = int sin(theta) dtheta dpsi int L exp(-a L^2) dL``.

    The same measure as the correlation numerator at ``u = 0``, so ``C(0) = 1``.
    """
    return math.fsum(_angular_weights(rotor, params))


def dipole_correlation(u: float, rotor: RotorSpec, params: ResponseParams) -> CorrelationPoint:
    """``C(u)``: ensemble average of ``cos(gamma)`` at dimensionless time ``u``."""
    if u < 0:
        raise DomainError(f"u must be >= 0, got {u!r}")
    w = _angular_weights(rotor, params)
    num = math.fsum(w * cos_gamma(_THETA_NODES, u, rotor))
    return CorrelationPoint(float(u), num / partition_normalizer(rotor, params))


def correlation_time_domain(t, rotor: RotorSpec, params: ResponseParams):
    """``C(t) = <mu(0).mu(t)> / mu^2`` at physical times ``t``.

    For each tilt, ``2a int L exp(-a L^2) cos(k L) dL = 1 - (k/sqrt(a)) F(k / (2 sqrt(a)))``
    with ``k = t / I1`` and Dawson's integral ``F``.
    """
    t = np.asarray(t, dtype=float)
    w = _angular_weights(rotor, params)
    c2 = _COS_NODES ** 2
    a = params.beta * angular_factor(_THETA_NODES, 0.0, rotor) / (2.0 * rotor.i3)
    k = t.ravel() / rotor.i1
    # All tilts share one Boltzmann width for a spherical top; evaluate per distinct width.
    widths, which = np.unique(a, return_inverse=True)
    x = k[:, None] / (2.0 * np.sqrt(widths)[None, :])
    precess = 1.0 - 2.0 * x * dawsn(x)
    # Accumulate node by node: elementwise adds give each t the same rounding
    # whatever batch it arrives in, which a matrix product does not.
    weights = (1.0 - c2) * w
    out = np.full(k.shape, (c2 * w).sum())
    for j in range(len(weights)):
        out += precess[:, which[j]] * weights[j]
    out = out / w.sum()
    return out.reshape(t.shape) if t.ndim else float(out[0])


def susceptibility(rotor: RotorSpec, params: ResponseParams,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Susceptibility ratio in the physical-time domain, with an error estimate."""
    omega, tau = params.omega, params.tau
    s = complex(omega, 1.0 / tau)
    horizon = TIME_CUTOFF * tau

    if omega == 0:
        def f(t):
            return np.exp(-t / tau) * correlation_time_domain(t, rotor, params)
    else:
        def f(t):
            return np.exp(1j * s * t) * correlation_time_domain(t, rotor, params)

    breaks = [horizon * 2.0 ** -j for j in range(1, 40)]
    if omega > 0:
        breaks = np.concatenate([breaks, np.arange(1, math.ceil(omega * horizon / math.pi)) * (math.pi / omega)])
    n_panels = len(breaks) + 1
    body = integrate_interval(f, 0.0, horizon, cfg, breakpoints=breaks,
                              max_subdivisions=cfg.max_subdivisions + n_panels)
    tail = tau * math.exp(-TIME_CUTOFF)
    factor = 1j * s
    value = 1.0 + factor * body.value
    if omega == 0:
        value = complex(value.real, 0.0)
    return EvalResult(value, abs(factor) * (body.abs_error_estimate + tail), body.subdivisions_used)


def susceptibility_ratio(rotor: RotorSpec, params: ResponseParams,
                         cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``chi(omega + i/tau) / chi(0)`` from the physical-time correlation function."""
    return susceptibility(rotor, params, cfg).value


def susceptibility_u_domain(rotor: RotorSpec, params: ResponseParams,
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Susceptibility ratio from the dimensionless-time kernel integral.

    Every tilt's kernel depends on ``u`` only through ``w = u sqrt(a)``, so the
    ``u`` integrals of all tilts collapse onto one integral over ``w`` of
    ``g_0(b w)`` against an angular sum of ``cos(gamma)``.
    """
    b = params.damping * rotor.i3
    a = params.beta * angular_factor(_THETA_NODES, 0.0, rotor) / (2.0 * rotor.i3)
    root_a = np.sqrt(a)
    c2 = _COS_NODES ** 2
    amp = 2.0 * math.pi * _COS_WEIGHTS * rotor.i3 / a
    z_scale = b.real if b.imag == 0 else b
    inner = replace(cfg, abs_tol=1e-3 * cfg.abs_tol)

    def f(w):
        w = np.asarray(w, dtype=float)
        gz = np.array([g(0, z_scale * wi, inner).value for wi in w])
        if b.imag == 0:
            gz = gz.real
        phase = np.cos(rotor.ratio * w[:, None] / root_a[None, :])
        ang = (c2 + (1.0 - c2) * phase) @ amp
        return gz * ang

    # |g_0(b w)| <= g_0(Re(b) w) and int_W^inf g_0(c w) dw = g_1(c W) / c.
    total_amp = float(np.abs(amp).sum())
    c = b.real
    horizon = 1.0 / c
    while total_amp * g(1, c * horizon).value.real / c > 1e-3 * cfg.abs_tol:
        horizon *= 1.5
    tail = total_amp * g(1, c * horizon).value.real / c
    spacing = math.pi * float(root_a.min()) / rotor.ratio
    breaks = np.arange(1, math.ceil(horizon / spacing)) * spacing
    body = integrate_interval(f, 0.0, horizon, cfg, breakpoints=breaks,
                              max_subdivisions=cfg.max_subdivisions + len(breaks) + 1)
    Z = partition_normalizer(rotor, params)
    factor = 1j * complex(params.omega, 1.0 / params.tau) / Z
    value = 1.0 + factor * body.value
    if params.omega == 0:
        value = complex(value.real, 0.0)
    return EvalResult(value, abs(factor) * (body.abs_error_estimate + tail), body.subdivisions_used)


def susceptibility_ratio_u_domain(rotor: RotorSpec, params: ResponseParams,
                                  cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    return susceptibility_u_domain(rotor, params, cfg).value
