"""Both sides of the weighted transform inequalities on concrete profiles.

The constants in these inequalities are existential, so every verifier
returns the two sides and their ratio; boundedness of the ratio over a family
of inputs is what can be checked.  Space-side integrals go through
:func:`~dunklrad.measure.radial_integral`; rearranged integrals go through
the curve integrators of :mod:`dunklrad.rearrange`.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import PowerCurve, StepCurve, FunctionCurve, antiderivative, lower_integrals
from .errors import DegenerateError, DivergenceError, DomainError, InadmissibleParameters
from .measure import Indicator, PowerProfile, ball_measure, radial_integral
from .rearrange import decreasing_rearrangement, rearranged_power_integral, reciprocal_profile
from .specfun import bessel_J, bessel_small_argument_bound
from .transform import TransformedProfile, transform_values
from .weights import pitt_index_check

PROBE_POINTS = 50


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_num(v) for v in x]
    return x


@dataclass
class InequalityReport:
    """Left and right side of an inequality, their ratio and diagnostics."""

    inequality_id: str
    lhs: float
    rhs: float
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def ratio(self):
        if self.rhs > 0:
            return self.lhs / self.rhs
        return 0.0 if self.lhs == 0 else math.inf

    def as_dict(self):
        return _num({"inequality_id": self.inequality_id, "lhs": self.lhs, "rhs": self.rhs,
                     "ratio": self.ratio, "parameters": self.parameters,
                     "diagnostics": self.diagnostics})

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def _params(idx, **kw):
    out = {"d": idx.d, "gamma": idx.gamma, "N": idx.N}
    out.update(kw)
    return out


def _star(idx, weight):
    """``weight*`` for a radial weight profile."""
    return decreasing_rearrangement(idx, weight).f_star


def _inv_star_inv(idx, v):
    """``[(1/v)*]^-1`` for a radial weight profile ``v``."""
    return _star(idx, reciprocal_profile(v)).reciprocal()


def _space_weight(v):
    """Half-line curve of a radial weight profile, used inside radial_integral."""
    if isinstance(v, PowerProfile):
        return PowerCurve(1.0, v.a)
    return FunctionCurve(v, v.breakpoints, v.scale)


def rearranged_transform_norm(idx, f, q, u_star):
    """``(int_0^inf ((F f)*)^q u* dt)^(1/q)``."""
    if f.is_zero():
        return 0.0, {}
    re = decreasing_rearrangement(idx, TransformedProfile(idx, f))
    val = rearranged_power_integral(re.f_star, q, u_star)
    return val ** (1.0 / q), {"rearrangement_exact": re.exact,
                              "domain_measure": re.domain_measure}


def verify_theorem1(idx, f, u, v, p, q):
    """Rearranged transform inequality for ``q >= 2``, ``1 < p <= q``.

    ``u, v`` are radial weight profiles.  lhs is
    ``(int ((F f)*)^q u*)^(1/q)``, rhs is ``(int (f*)^p [(1/v)*]^-1)^(1/p)``.
    """
    if not (1.0 < p <= q and q >= 2.0):
        raise InadmissibleParameters(f"need 1 < p <= q and q >= 2, got p={p}, q={q}")
    params = _params(idx, p=p, q=q, f=f.describe(), u=u.describe(), v=v.describe())
    if f.is_zero():
        return InequalityReport("thm1", 0.0, 0.0, params)
    us = _star(idx, u)
    w = _inv_star_inv(idx, v)
    lhs, diag = rearranged_transform_norm(idx, f, q, us)
    fs = decreasing_rearrangement(idx, f)
    rhs = rearranged_power_integral(fs.f_star, p, w) ** (1.0 / p)
    return InequalityReport("thm1", lhs, rhs, params, diag)


def theorem1_necessity_probe(idx, r, u, v, p, q, n=PROBE_POINTS):
    """Numerical walk through the constructive necessity argument.

    With ``m = nu_k(B(0,1))``, ``R = (r m / (1+m^2))^(1/N)`` and
    ``r' = r m^2/(1+m^2)``, the test function is the indicator of the ball of
    radius ``R``.  Three chain links are sampled at ``n`` points each:

    * ``J_nu(y) > y^nu / (2^(nu+1) Gamma(nu+1))`` for ``0 < y < 1``;
    * ``F(chi)(x) > r'/2`` for ``|x| < 1/R``;
    * ``D_{F(chi)}(s) > 1/r`` for ``0 < s < r'/2``.

    Also reports the resulting lower bound for the left side, the left side
    itself, the right side and the boundedness quotient evaluated at ``s = r``.
    """
    if r <= 0:
        raise DomainError("r must be positive")
    N, nu = idx.N, idx.nu
    m = ball_measure(idx, 1.0)
    R = (r * m / (1.0 + m * m)) ** (1.0 / N)
    r1 = r * m * m / (1.0 + m * m)
    f = Indicator(R)
    params = _params(idx, r=r, p=p, q=q, u=u.describe(), v=v.describe(), R=R, r_prime=r1)
    # sample points strictly inside the open intervals
    frac = (np.arange(n) + 0.5) / n

    y = frac
    bessel = bessel_J(nu, y)
    bound = bessel_small_argument_bound(nu, y)
    link_bessel = bessel > bound

    x = frac / R
    ft = transform_values(idx, f, x)
    link_transform = ft > 0.5 * r1

    s = frac * 0.5 * r1
    tf = TransformedProfile(idx, f)
    re_t = decreasing_rearrangement(idx, tf)
    D = re_t.D(s)
    link_measure = D > 1.0 / r

    diag = {
        "links": {
            "bessel_lower_bound": bool(np.all(link_bessel)),
            "transform_above_half_r_prime": bool(np.all(link_transform)),
            "distribution_above_inverse_r": bool(np.all(link_measure)),
        },
        "margins": {
            "bessel_lower_bound": float(np.min(bessel / bound)),
            "transform_above_half_r_prime": float(np.min(ft / (0.5 * r1))),
            "distribution_above_inverse_r": float(np.min(D * r)),
        },
        "ball_measure_bound": (1.0 + m * m) / r,
    }
    if u.is_zero():
        params["u_zero"] = True
        return {"lower_bound_lhs": 0.0, "lhs": 0.0, "rhs": 0.0, "condition_value": 0.0,
                "chain_holds": all(diag["links"].values()), "parameters": params,
                "diagnostics": diag}

    us = _star(idx, u)
    w = _inv_star_inv(idx, v)
    U = float(lower_integrals(us, np.array([1.0 / r]))[0])
    lower = m * m / (2.0 * (1.0 + m * m)) * r * U ** (1.0 / q)
    lhs = rearranged_power_integral(re_t.f_star, q, us) ** (1.0 / q)
    W = lower_integrals(w, np.array([r1, r]))
    rhs = W[0] ** (1.0 / p)
    condition = r * U ** (1.0 / q) * W[1] ** (-1.0 / p)
    diag["links"]["lhs_above_lower_bound"] = bool(lhs >= lower)
    return {"lower_bound_lhs": lower, "lhs": lhs, "rhs": rhs, "condition_value": condition,
            "chain_holds": all(diag["links"].values()), "parameters": params,
            "diagnostics": diag}


def verify_weighted(idx, f, u, v, p, q, inequality_id="weighted"):
    """``(int |F f|^q u dnu_k)^(1/q)`` against ``(int |f|^p v dnu_k)^(1/p)``.

    ``u, v`` are half-line curves evaluated at ``|x|``.
    """
    params = _params(idx, p=p, q=q, f=f.describe())
    if f.is_zero():
        return InequalityReport(inequality_id, 0.0, 0.0, params)
    rhs = radial_integral(idx, f, p, v) ** (1.0 / p)
    lhs = radial_integral(idx, TransformedProfile(idx, f), q, u) ** (1.0 / q)
    return InequalityReport(inequality_id, lhs, rhs, params)


def verify_pitt(idx, f, alpha, beta, p, q, strict=True):
    """Power-weight transform inequality with ``u = |x|^alpha``, ``v = |x|^beta``.

    With ``strict`` an inadmissible tuple raises
    :class:`InadmissibleParameters` naming the violated conditions; otherwise
    both sides are computed anyway and the admissibility record is attached.
    """
    check = pitt_index_check(idx, alpha, beta, p, q)
    if strict and not check["admissible"]:
        raise InadmissibleParameters("; ".join(check["violations"]))
    rep = verify_weighted(idx, f, PowerCurve(1.0, alpha), PowerCurve(1.0, beta), p, q,
                          "thm2_pitt")
    rep.parameters.update(alpha=alpha, beta=beta)
    rep.diagnostics.update(admissible=check["admissible"],
                           constraint_residual=check["constraint_residual"],
                           violations=check["violations"])
    return rep


def verify_hlp(idx, f, p):
    """Hardy-Littlewood-Paley: weight ``|x|^(N(p-2))`` on the transform side, ``1 < p <= 2``."""
    if not 1.0 < p <= 2.0:
        raise InadmissibleParameters(f"need 1 < p <= 2, got p={p}")
    e = idx.N * (p - 2.0)
    u = None if e == 0 else PowerCurve(1.0, e)
    rep = verify_weighted(idx, f, u, None, p, p, "hlp")
    rep.parameters.update(weight_exponent=e)
    return rep


def _primitive(curve):
    """Callable ``x -> int_0^x curve`` (exact for step and power curves)."""
    if isinstance(curve, StepCurve):
        cum = np.concatenate([[0.0], np.cumsum(curve.levels * np.diff(curve.edges))])
        return lambda x: np.interp(x, curve.edges, cum)
    if isinstance(curve, PowerCurve):
        return curve.antiderivative_at
    return antiderivative(curve)


def rearrangement_34_diagnostic(idx, f, q, s_grid=None):
    """Per-``s`` ratio ``int_0^s ((F f)*)^q / int_0^s (int_0^{1/t} f*)^q dt``.

    The ratio is bounded by an unspecified constant for ``q >= 2``; it is a
    diagnostic, not a check.  Returns ``{"s", "ratio", "numerator",
    "denominator"}``; the zero profile gives empty arrays.
    """
    if q < 2:
        raise InadmissibleParameters("the rearrangement bound needs q >= 2")
    s = np.geomspace(1e-2, 1e2, 41) if s_grid is None else np.asarray(s_grid, dtype=float)
    if f.is_zero():
        e = np.zeros(0)
        return {"s": e, "ratio": e, "numerator": e, "denominator": e}
    ft_star = decreasing_rearrangement(idx, TransformedProfile(idx, f)).f_star
    num = lower_integrals(ft_star.pow(q), s)
    fs = decreasing_rearrangement(idx, f).f_star
    A = _primitive(fs)
    bps = (1.0 / np.asarray(fs.breakpoints)[np.asarray(fs.breakpoints) > 0]).tolist()
    if len(bps) > 64:
        bps = []
    g = FunctionCurve(lambda t: np.asarray(A(1.0 / t), dtype=float) ** q, sorted(bps))
    den = lower_integrals(g, s)
    if np.any(den <= 0):
        raise DegenerateError("denominator vanishes")
    return {"s": s, "ratio": num / den, "numerator": num, "denominator": den}


__all__ = [
    "InequalityReport", "rearranged_transform_norm", "verify_theorem1",
    "theorem1_necessity_probe", "verify_weighted", "verify_pitt", "verify_hlp",
    "rearrangement_34_diagnostic", "DivergenceError",
]
