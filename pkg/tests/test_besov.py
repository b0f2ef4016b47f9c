import math

import numpy as np
import pytest

from dunklrad.errors import InadmissibleParameters
from dunklrad.measure import DunklIndex, Gaussian, Indicator, Zero, radial_integral
from dunklrad.besov import (
    BesovParams, annulus_bound, annulus_report, besov_report, besov_seminorm, convolution_norm,
    convolved, make_phi, phi_for, verify_theorem3,
)

IDX3 = DunklIndex(3)
CFG = BesovParams(IDX3, 2.0, 2.0, -0.5, 0.5)
COARSE = np.geomspace(1e-3, 1e3, 31)


def test_params_validation():
    assert CFG.delta == pytest.approx(1.75)
    with pytest.raises(InadmissibleParameters, match="residual"):
        BesovParams(IDX3, 2.0, 2.0, -0.5, 0.7)
    with pytest.raises(InadmissibleParameters, match="beta"):
        BesovParams(IDX3, 1.5, 1.5, -1.5, 0.0)
    with pytest.raises(InadmissibleParameters, match="1 < p <= 2"):
        BesovParams(IDX3, 2.5, 2.5, -1.0, 1.0)
    corner = BesovParams.hlp_corner(IDX3, 1.5)
    assert (corner.alpha, corner.beta, corner.q) == (-1.5, 0.0, 1.5)
    assert corner.delta == pytest.approx(2.0)


def test_phi_admissible():
    for order in (1, 2, 3):
        phi = make_phi(IDX3, order)
        assert phi.admissible()
        s = np.linspace(0.5, 1.0, 51)
        assert np.all(phi.transform_profile(s) == pytest.approx(s ** (2 * order) * np.exp(-s * s)))
    with pytest.raises(ValueError):
        make_phi(IDX3, 0)


def test_phi_order_selection():
    assert phi_for(CFG).order == 1
    assert phi_for(BesovParams.hlp_corner(IDX3, 1.5)).order == 2


def test_convolution_closed_form():
    # gaussian * phi_t has transform t^2 s^2 exp(-(1/2 + t^2) s^2)
    phi = make_phi(IDX3)
    r = np.linspace(0.0, 6.0, 25)
    N = IDX3.N
    for t in (0.3, 1.0, 2.5):
        sig2 = 1.0 / (1.0 + 2.0 * t * t)
        closed = t * t * sig2 ** (1 + N / 2) * (N - sig2 * r * r) * np.exp(-sig2 * r * r / 2)
        got = convolved(IDX3, Gaussian(), phi, t)(r)
        assert np.max(np.abs(got - closed)) < 1e-11


def test_convolution_norm_against_closed_form_profile():
    from dunklrad.curves import PowerCurve
    from dunklrad.measure import Profile

    phi = make_phi(IDX3)
    N, t = IDX3.N, 0.7
    sig2 = 1.0 / (1.0 + 2.0 * t * t)
    closed = Profile(lambda r: t * t * sig2 ** (1 + N / 2) * (N - sig2 * r * r)
                     * np.exp(-sig2 * r * r / 2), breakpoints=[math.sqrt(N / sig2)])
    ref = math.sqrt(radial_integral(IDX3, closed, 2.0, PowerCurve(1.0, 0.5)))
    assert convolution_norm(CFG, Gaussian(), phi, t) == pytest.approx(ref, rel=1e-8)


def test_seminorm_converges_with_expected_slopes():
    out = besov_seminorm(CFG, Gaussian(), t_grid=COARSE)
    flags = out["convergence_flags"]
    assert flags["converged"] and math.isfinite(out["value"]) and out["value"] > 0
    # small t: ||f * phi_t|| ~ t^2; large t: ~ t^(-N + (N + beta)/p)
    assert flags["low_slope"] == pytest.approx(2 - CFG.delta, abs=0.05)
    assert flags["high_slope"] == pytest.approx(-3 + 1.75 - CFG.delta, abs=0.05)


def test_seminorm_value_stable_under_grid_refinement():
    a = besov_seminorm(CFG, Gaussian(), t_grid=COARSE)["value"]
    b = besov_seminorm(CFG, Gaussian(), t_grid=np.geomspace(1e-3, 1e3, 61))["value"]
    assert a == pytest.approx(b, rel=1e-2)


def test_first_order_phi_diverges_at_smoothness_two():
    corner = BesovParams.hlp_corner(IDX3, 1.5)
    assert corner.delta == pytest.approx(2.0)
    out = besov_seminorm(corner, Gaussian(), make_phi(IDX3, 1), t_grid=COARSE)
    assert not out["convergence_flags"]["converged"]
    assert out["convergence_flags"]["divergent_end"] == "small_t"
    assert math.isinf(out["value"])


def test_zero_profile():
    out = besov_seminorm(CFG, Zero())
    assert out["value"] == 0.0 and out["convergence_flags"]["converged"]
    assert annulus_bound(CFG, Zero(), make_phi(IDX3), 1.0)["ratio"] == 0.0


def test_annulus_bound_positive_and_finite():
    phi = make_phi(IDX3)
    for t in (0.1, 1.0, 10.0):
        out = annulus_bound(CFG, Indicator(1.0), phi, t)
        assert 0 < out["ratio"] < math.inf
    rep = annulus_report(CFG, Gaussian(), phi, 1.0)
    assert rep.inequality_id == "annulus" and rep.ratio > 0


def test_verify_theorem3_report():
    res = verify_theorem3(CFG, Gaussian(), t_grid=COARSE,
                          annulus_grid=np.geomspace(1e-1, 1e1, 5))
    assert res["conclusion"] and math.isfinite(res["transform_l1_norm"])
    assert res["transform_l1_norm"] == pytest.approx(1.0, rel=1e-8)  # the gaussian is its own transform
    rep = besov_report(res, Gaussian())
    assert rep["t_curve"].splitlines()[0] == "t,norm,integrand"
    assert rep["phi_order"] == 1
