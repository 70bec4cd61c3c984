"""Numerics for the g-function ``g_m(z) = int_0^inf y^m exp(-y^2 - z/y) dy``.

The family contains ``Gamma((m+1)/2) / 2`` as its value at ``z = 0``.  The
package evaluates it on ``Re z >= 0``, checks its identities, and applies it
to the dielectric response of rigid symmetric-top polar molecules.
"""

from .core import (
    M_MAX,
    PolarArg,
    g,
    g_derivative,
    g_gamma_special,
    g_inverse_form,
    g_polar_parts,
    ode_residual,
    phi,
    phi_direct,
    recurrence_residual,
    taylor_truncated,
)
from .errors import ConvergenceError, DomainError, GFunctionError
from .quadrature import (
    DecayClass,
    EvalResult,
    Integrand,
    OscillationPolicy,
    QuadratureConfig,
    integrate_interval,
    integrate_semi_infinite,
)

__version__ = "0.1.0"
