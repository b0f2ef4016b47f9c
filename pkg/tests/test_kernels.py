import os
import subprocess
import sys

import numpy as np
import pytest

from dunklrad import kernels
from dunklrad.kernels import numba_backend, numpy_backend

needs_numba = pytest.mark.skipif(numba_backend is None, reason="numba backend not active")

X = np.concatenate([np.linspace(0.0, 30.0, 3001), np.geomspace(30.0, 5e3, 500)])


@needs_numba
@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.25, 3.0, 9.5, 40.0])
@pytest.mark.parametrize("name", ["besselj", "jnorm"])
def test_backends_agree(nu, name):
    a = getattr(numba_backend, name)(nu, X)
    b = getattr(numpy_backend, name)(nu, X)
    ok = np.isfinite(a)
    assert np.array_equal(ok, np.isfinite(b))
    assert np.max(np.abs(a[ok] - b[ok])) < 1e-13


@needs_numba
def test_cheb_backends_agree():
    from dunklrad.kernels import _cheb_numba, _cheb_numpy

    rng = np.random.default_rng(3)
    left = np.linspace(0.0, 2.0, 8, endpoint=False)
    right = left + 0.25
    coef = rng.standard_normal((8, 12))
    x = np.concatenate([rng.uniform(-0.5, 2.5, 500), [0.0, 2.0]])
    a = _cheb_numba.cheb_eval(left, right, coef, x)
    b = _cheb_numpy.cheb_eval(left, right, coef, x)
    assert np.max(np.abs(a - b)) < 1e-13
    assert np.all(a[(x < 0) | (x > 2)] == 0)


def test_dispatch_shapes():
    out = kernels.jnorm(0.5, np.ones((3, 2)))
    assert out.shape == (3, 2)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, DUNKLRAD_DISABLE_NUMBA="1")
    code = "from dunklrad import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "numpy"
