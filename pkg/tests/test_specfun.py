import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dunklrad.errors import DomainError
from dunklrad.specfun import (
    bessel_J, bessel_j_normalized, bessel_small_argument_bound, gamma_fn,
)

ORDERS = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 4.0, 10.5]


@pytest.mark.parametrize("nu", ORDERS)
def test_bessel_matches_scipy(nu):
    x = np.concatenate([np.linspace(0.0, 5.0, 201), np.geomspace(5.0, 2e3, 400)])
    if nu < 0:
        x = x[1:]  # J_{-1/2} blows up at the origin
    ours = bessel_J(nu, x)
    ref = special.jv(nu, x)
    # absolute error scaled by the envelope sqrt(2/(pi x))
    env = np.minimum(1.0, np.sqrt(2.0 / (np.pi * np.maximum(x, 1e-300))))
    assert np.max(np.abs(ours - ref) / env) < 1e-12


@pytest.mark.parametrize("nu,x", [(0.0, 7.5), (1.5, 31.0), (4.0, 0.3), (10.5, 120.0),
                                  (0.5, 1e4), (2.0, 55.5)])
def test_bessel_matches_mpmath(nu, x):
    ref = float(mpmath.besselj(nu, x))
    assert bessel_J(nu, x) == pytest.approx(ref, rel=1e-11, abs=1e-15)


def test_half_integer_closed_forms():
    x = np.linspace(0.01, 60.0, 500)
    assert np.allclose(bessel_j_normalized(-0.5, x), np.cos(x), atol=1e-13)
    assert np.allclose(bessel_j_normalized(0.5, x), np.sin(x) / x, atol=1e-13)
    j32 = 3.0 * (np.sin(x) - x * np.cos(x)) / x ** 3
    assert np.allclose(bessel_j_normalized(1.5, x[x > 0.5]), j32[x > 0.5], atol=1e-12)


@pytest.mark.parametrize("nu", ORDERS)
def test_normalized_at_origin(nu):
    assert bessel_j_normalized(nu, 0.0) == 1.0
    assert bessel_j_normalized(nu, 1e-9) == pytest.approx(1.0, abs=1e-15)


def test_scalar_and_array_shapes():
    assert isinstance(bessel_J(1.0, 2.0), float)
    out = bessel_J(1.0, np.ones((2, 3)))
    assert out.shape == (2, 3)


@pytest.mark.parametrize("bad", [-0.6, float("nan")])
def test_order_domain(bad):
    with pytest.raises(DomainError):
        bessel_J(bad, 1.0)


def test_argument_domain():
    with pytest.raises(DomainError):
        bessel_J(0.5, [-1.0, 1.0])
    with pytest.raises(DomainError):
        gamma_fn(0.0)


def test_gamma_matches_stdlib():
    for x in (0.5, 1.0, 2.5, 7.0):
        assert gamma_fn(x) == math.gamma(x)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.5, 12.0), x=st.floats(0.0, 500.0))
def test_normalized_bounded_by_one(nu, x):
    assert abs(bessel_j_normalized(nu, x)) <= 1.0 + 1e-12


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.5, 10.0), x=st.floats(0.1, 300.0))
def test_three_term_recurrence(nu, x):
    lhs = bessel_J(nu - 1.0 if nu >= 0.5 else nu, x) + bessel_J(nu + 1.0, x)
    rhs = 2.0 * nu / x * bessel_J(nu, x)
    assert lhs == pytest.approx(rhs, abs=1e-11 * max(1.0, 2 * nu / x))


@settings(max_examples=40, deadline=None)
@given(nu=st.floats(-0.49, 8.0), y=st.floats(1e-6, 0.999))
def test_small_argument_bound(nu, y):
    assert bessel_J(nu, y) > bessel_small_argument_bound(nu, y)


def test_small_argument_bound_domain():
    with pytest.raises(DomainError):
        bessel_small_argument_bound(-0.5, 0.5)
