import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from dunklrad.curves import PowerCurve, StepCurve, power
from dunklrad.errors import DivergenceError, DomainError
from dunklrad.measure import (
    DunklIndex, Gaussian, Indicator, PowerGaussian, PowerProfile, Step, Zero, ball_measure,
    ball_radius, radial_integral,
)
from dunklrad.rearrange import (
    decreasing_rearrangement, distribution, hardy_lemma, hardy_littlewood,
    inverse_relation_violations, is_nonincreasing, layer_cake, lp_identity_check,
    rearranged_power_integral, reciprocal_profile, reverse_hardy_littlewood,
)

T = np.geomspace(1e-3, 1e3, 61)


@pytest.mark.parametrize("a", [-0.5, -1.0, -2.5])
def test_power_profile_level_set_route(idx, a):
    N = idx.N
    re = decreasing_rearrangement(idx, PowerProfile(a), method="monotone")
    closed = (N / idx.d_k) ** (a / N) * T ** (a / N)
    assert re.f_star(T) == pytest.approx(closed, rel=1e-12)
    s = np.geomspace(1e-2, 1e2, 9)
    assert re.D(s) == pytest.approx(idx.d_k / N * s ** (N / a), rel=1e-10)


@pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
def test_reciprocal_power_weight(idx, b):
    N = idx.N
    re = decreasing_rearrangement(idx, reciprocal_profile(PowerProfile(b)), method="monotone")
    assert re.f_star(T) == pytest.approx((N / idx.d_k) ** (-b / N) * T ** (-b / N), rel=1e-12)


def test_positive_power_has_infinite_level_sets():
    idx = DunklIndex(2)
    with pytest.raises(DivergenceError) as err:
        decreasing_rearrangement(idx, PowerProfile(1.0))
    assert err.value.side == "level_set"
    with pytest.raises(DivergenceError):
        decreasing_rearrangement(idx, PowerProfile(0.5), method="monotone")


def test_gaussian_distribution_closed_form(idx):
    # {exp(-r^2/2) > s} is the ball of radius sqrt(2 log(1/s))
    s = np.linspace(0.05, 0.95, 10)
    D = distribution(idx, Gaussian())(s)
    assert D == pytest.approx(ball_measure(idx, np.sqrt(2 * np.log(1 / s))), rel=1e-10)
    fs = decreasing_rearrangement(idx, Gaussian()).f_star(T)
    assert fs == pytest.approx(np.exp(-0.5 * ball_radius(idx, T) ** 2), rel=1e-12)


def test_indicator_and_step_exact(idx):
    re = decreasing_rearrangement(idx, Indicator(2.0, 3.0))
    m = ball_measure(idx, 2.0)
    assert re.f_star(np.array([0.5 * m, 2 * m])) == pytest.approx([3.0, 0.0])
    step = Step([0.0, 1.0, 2.0, 3.0], [1.0, 4.0, 2.0])
    re = decreasing_rearrangement(idx, step)
    m1, m2, m3 = ball_measure(idx, np.array([1.0, 2.0, 3.0]))
    # sorted cells: level 4 (measure m2-m1), level 2 (m3-m2), level 1 (m1)
    cuts = np.cumsum([m2 - m1, m3 - m2, m1])
    probes = np.array([0.5 * cuts[0], 0.5 * (cuts[0] + cuts[1]), 0.5 * (cuts[1] + cuts[2]),
                       cuts[2] * 1.1])
    assert re.f_star(probes) == pytest.approx([4.0, 2.0, 1.0, 0.0])
    assert re.exact


def _annulus_measure(idx, a, s):
    """Measure of {r^a e^{-r^2/2} > s}: an annulus with radii found by root bracketing."""
    peak_r = math.sqrt(a)
    g = lambda r: r ** a * math.exp(-r * r / 2) - s
    r1 = optimize.brentq(g, 1e-12, peak_r, xtol=1e-14)
    r2 = optimize.brentq(g, peak_r, 60.0, xtol=1e-14)
    return ball_measure(idx, r2) - ball_measure(idx, r1)


def test_sort_route_against_annulus_oracle(idx):
    f = PowerGaussian(2.0)
    assert not is_nonincreasing(f)
    re = decreasing_rearrangement(idx, f)
    assert not re.exact
    peak = 2.0 / math.e
    for s in peak * np.array([0.1, 0.3, 0.6, 0.9]):
        # node sorting gives a step distribution; accuracy follows the node spacing
        assert re.D(np.array([s]))[0] == pytest.approx(_annulus_measure(idx, 2.0, s), rel=0.03)


def test_sort_route_agrees_with_level_set_route():
    idx = DunklIndex(3, 1.0)
    f = Gaussian(0.7)
    a = decreasing_rearrangement(idx, f, method="sort")
    b = decreasing_rearrangement(idx, f, method="monotone")
    t = np.geomspace(1e-2, 1.0, 21)
    assert np.max(np.abs(a.f_star(t) / b.f_star(t) - 1)) < 0.05
    for p in (1.0, 2.0, 3.5):
        assert rearranged_power_integral(a.f_star, p) == pytest.approx(
            rearranged_power_integral(b.f_star, p), rel=1e-8)


@pytest.mark.parametrize("f", [Gaussian(1.3), Indicator(0.7), PowerGaussian(2.0),
                               PowerGaussian(1.0, 0.5), Step([0.0, 1.0, 2.0], [2.0, 1.0])],
                         ids=lambda f: f.describe()["family"])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_equimeasurability(idx, f, p):
    out = lp_identity_check(idx, f, p)
    assert out["layer_cake"] == pytest.approx(out["space_norm"], rel=1e-8)
    assert out["rearranged_norm"] == pytest.approx(out["space_norm"], rel=1e-8)


def test_zero_profile_rearrangement():
    idx = DunklIndex(2)
    re = decreasing_rearrangement(idx, Zero())
    assert np.all(re.f_star(T) == 0)
    assert lp_identity_check(idx, Zero(), 2.0)["space_norm"] == 0.0


def test_inverse_relation(idx):
    re = decreasing_rearrangement(idx, Gaussian())
    s = np.linspace(0.01, 0.99, 25)
    assert inverse_relation_violations(re, s, np.geomspace(1e-3, 1e2, 25)) == 0


def test_layer_cake_of_power_distribution_diverges():
    with pytest.raises(DivergenceError):
        layer_cake(PowerCurve(1.0, -2.0), 2.0)


def test_hardy_littlewood_inequalities():
    idx = DunklIndex(3)
    f, v = Gaussian(), PowerGaussian(2.0, 0.6)
    hl = hardy_littlewood(idx, f, v)
    assert hl["lhs"] <= hl["rhs"] * (1 + 1e-9)
    # equality when both are non-increasing
    hl = hardy_littlewood(idx, Gaussian(), Gaussian(2.0))
    assert hl["lhs"] == pytest.approx(hl["rhs"], rel=1e-8)
    rhl = reverse_hardy_littlewood(idx, Gaussian(), PowerProfile(1.0))
    assert rhl["lhs"] <= rhl["rhs"] * (1 + 1e-9)


def test_hardy_lemma():
    grid = np.geomspace(1e-3, 1e3, 61)
    f = StepCurve([0.0, 1.0, 2.0], [1.0, 0.5])
    g = StepCurve([0.0, 2.0], [1.0])
    out = hardy_lemma(f, g, power(-0.5), grid)
    assert out["premise"] and out["lhs"] <= out["rhs"]


def test_unknown_method():
    with pytest.raises(DomainError):
        decreasing_rearrangement(DunklIndex(1), Gaussian(), method="bogus")


@settings(max_examples=30, deadline=None)
@given(sigma=st.floats(0.3, 3.0), a=st.floats(0.5, 4.0), d=st.integers(1, 3),
       gamma=st.floats(0.0, 2.0))
def test_rearrangement_nonincreasing(sigma, a, d, gamma):
    idx = DunklIndex(d, gamma)
    fs = decreasing_rearrangement(idx, PowerGaussian(a, sigma)).f_star(T)
    assert np.all(np.diff(fs) <= 0)


@settings(max_examples=30, deadline=None)
@given(lam=st.floats(0.2, 5.0), t=st.floats(1e-3, 1e2))
def test_dilation_rule(lam, t):
    # (f(lam .))*(t) = f*(lam^N t)
    idx = DunklIndex(2, 0.5)
    base = decreasing_rearrangement(idx, Gaussian()).f_star
    dil = decreasing_rearrangement(idx, Gaussian().dilate(lam)).f_star
    assert dil(np.array([t]))[0] == pytest.approx(base(np.array([lam ** idx.N * t]))[0],
                                                  rel=1e-10, abs=1e-300)
