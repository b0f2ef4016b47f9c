"""Hot numeric kernels with a compiled and a pure-numpy implementation.

The compiled (numba) backend is used when numba imports and
``DUNKLRAD_DISABLE_NUMBA`` is unset; otherwise the numpy backend is used.
Both backends are importable directly for comparison:

    from dunklrad.kernels import numpy_backend, numba_backend
"""

import numpy as np

from .._jit import NUMBA_AVAILABLE
from . import _bessel_numpy as numpy_backend
from . import _cheb_numpy

if NUMBA_AVAILABLE:
    from . import _bessel_numba as numba_backend
    from . import _cheb_numba

    _active = numba_backend
    _cheb = _cheb_numba
    BACKEND = "numba"
else:
    numba_backend = None
    _active = numpy_backend
    _cheb = _cheb_numpy
    BACKEND = "numpy"


def besselj(nu, x):
    """Bessel function of the first kind, elementwise over a 1-d float array."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _active.besselj(float(nu), x.ravel()).reshape(x.shape)


def jnorm(nu, x):
    """Normalized Bessel function ``2**nu Gamma(nu+1) J_nu(x) / x**nu``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _active.jnorm(float(nu), x.ravel()).reshape(x.shape)


def cheb_eval(left, right, coef, x):
    """Evaluate a piecewise Chebyshev series (zero outside ``[left[0], right[-1]]``)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = _cheb.cheb_eval(left, right, np.ascontiguousarray(coef), x.ravel())
    return out.reshape(x.shape)


def warmup():
    """Trigger compilation of the active backend (no-op for numpy)."""
    probe = np.array([0.0, 1.0, 10.0, 40.0])
    besselj(0.5, probe)
    jnorm(0.5, probe)
    cheb_eval(np.array([0.0]), np.array([1.0]), np.ones((1, 3)), probe)


__all__ = ["BACKEND", "besselj", "cheb_eval", "jnorm", "numba_backend", "numpy_backend", "warmup"]
