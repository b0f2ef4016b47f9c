"""Gamma and Bessel functions of the first kind for real order nu >= -1/2.

The Bessel evaluators dispatch to :mod:`dunklrad.kernels`: ascending series
for small arguments, Miller backward recurrence in the transition zone, and
the Hankel expansion with upward recurrence for large arguments.
"""

import math

import numpy as np

from . import kernels
from .errors import DomainError

MIN_ORDER = -0.5


def gamma_fn(x):
    """Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def _check(nu, x):
    nu = float(nu)
    if nu < MIN_ORDER or math.isnan(nu):
        raise DomainError(f"Bessel order must be >= -1/2, got {nu}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("Bessel argument must be >= 0")
    return nu, arr


def _out(arr, values):
    return float(values) if arr.ndim == 0 else values


def bessel_J(nu, x):
    """J_nu(x) for scalar or array ``x >= 0``."""
    nu, arr = _check(nu, x)
    return _out(arr, kernels.besselj(nu, np.atleast_1d(arr)).reshape(arr.shape))


def bessel_j_normalized(nu, x):
    """Normalized Bessel function j_nu(x) = 2^nu Gamma(nu+1) J_nu(x) / x^nu.

    ``j_nu(0) = 1`` and ``|j_nu(x)| <= 1``; ``j_{-1/2}(x) = cos x`` and
    ``j_{1/2}(x) = sin(x)/x``.
    """
    nu, arr = _check(nu, x)
    return _out(arr, kernels.jnorm(nu, np.atleast_1d(arr)).reshape(arr.shape))


def bessel_small_argument_bound(nu, y):
    """Lower bound ``y^nu / (2^(nu+1) Gamma(nu+1))`` valid for ``0 < y < 1``.

    Obtained from the Poisson integral by bounding ``cos(y cos t)`` below by
    ``cos 1 > 1/2``; requires ``nu > -1/2``.
    """
    nu = float(nu)
    if not nu > MIN_ORDER:
        raise DomainError("small-argument bound needs nu > -1/2")
    y = np.asarray(y, dtype=float)
    return np.exp(nu * np.log(y) - (nu + 1.0) * math.log(2.0) - math.lgamma(nu + 1.0))
