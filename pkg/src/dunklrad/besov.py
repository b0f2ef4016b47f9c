"""Besov-type seminorms built from dilated band-pass convolutions.

The test function ``phi`` is defined on the transform side,
``phi_hat(s) = s^(2m) exp(-s^2)``, so that ``f * phi_t`` is the inverse
transform of ``F f(s) * phi_hat(t s)`` and the lower bound
``|phi_hat(s)| > c s^2`` on ``1/2 <= s <= 1`` holds in closed form.  The
default ``m = 1`` makes ``||f * phi_t||`` behave like ``t^2`` as ``t -> 0``,
so seminorms with smoothness ``delta >= 2`` need ``m >= 2``
(:func:`phi_for`).
"""

import csv
import io
import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .curves import PowerCurve
from .errors import DivergenceError, InadmissibleParameters
from .inequalities import InequalityReport, _num
from .measure import DunklIndex, PowerGaussian, radial_integral
from .transform import TransformedProfile
from .weights import pitt_index_check

T_LO, T_HI, T_N = 1e-3, 1e3, 61
ANNULUS_LO, ANNULUS_HI, ANNULUS_N = 1e-2, 1e2, 25
SLOPE_MARGIN = 0.05


@dataclass(frozen=True)
class BesovParams:
    """Exponents of the weighted Besov space and of the power weights.

    ``delta = ((q-1) N - alpha) / q``.  ``corner=True`` admits ``beta = 0``
    (the unweighted Hardy-Littlewood-Paley case ``alpha = N(p-2)``, ``q = p``);
    otherwise ``0 < beta < N(p-1)`` is enforced.
    """

    idx: DunklIndex
    p: float
    q: float
    alpha: float
    beta: float
    corner: bool = False

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise InadmissibleParameters("; ".join(problems))

    @classmethod
    def hlp_corner(cls, idx, p):
        return cls(idx, p, p, idx.N * (p - 2.0), 0.0, corner=True)

    @property
    def delta(self):
        return ((self.q - 1.0) * self.idx.N - self.alpha) / self.q

    def violations(self):
        N, p, q, a, b = self.idx.N, self.p, self.q, self.alpha, self.beta
        out = []
        if not 1.0 < p <= 2.0:
            out.append("1 < p <= 2")
        if not p <= q:
            out.append("p <= q")
        if not -N < a < 0.0:
            out.append(f"-N < alpha < 0 (N={N:g})")
        if self.corner:
            if b != 0.0 or q != p:
                out.append("corner case needs beta = 0 and q = p")
        elif not 0.0 < b < N * (p - 1.0):
            out.append(f"0 < beta < N(p-1) = {N * (p - 1.0):g}")
        if not (p + a) / (p - 1.0) < N:
            out.append("(p + alpha)/(p - 1) < N")
        res = pitt_index_check(self.idx, a, b, p, q)["constraint_residual"]
        if abs(res) > 1e-12:
            out.append(f"(alpha/q + beta/p)/N = 1 - 1/p - 1/q (residual {res:.6g})")
        return out

    def as_dict(self):
        return {"d": self.idx.d, "gamma": self.idx.gamma, "N": self.idx.N, "p": self.p,
                "q": self.q, "alpha": self.alpha, "beta": self.beta, "delta": self.delta,
                "corner": self.corner}


@dataclass
class PhiSpec:
    """Band-pass test function given by its transform ``s^(2 order) exp(-s^2)``."""

    idx: DunklIndex
    order: int = 1
    transform_profile: object = None
    admissibility_constant: float = 0.0
    _spatial: object = field(default=None, repr=False)

    @property
    def spatial_profile(self):
        if self._spatial is None:
            self._spatial = TransformedProfile(self.idx, self.transform_profile)
        return self._spatial

    def dilated_transform(self, t):
        """``s -> phi_hat(t s)``, the transform of ``phi_t``."""
        return self.transform_profile.dilate(t)

    def admissible(self, n=201):
        """Check ``phi_hat(s) > c s^2`` on ``[1/2, 1]``."""
        s = np.linspace(0.5, 1.0, n)
        return bool(np.all(self.transform_profile(s) > self.admissibility_constant * s * s))


def make_phi(idx, order=1):
    """``phi_hat(s) = s^(2 order) exp(-s^2)`` with constant ``e^-1/2 * 4^(1-order)``."""
    if order < 1 or int(order) != order:
        raise ValueError("order must be a positive integer")
    order = int(order)
    prof = PowerGaussian(2.0 * order, 1.0 / math.sqrt(2.0))
    c = 0.5 * math.exp(-1.0) * 4.0 ** (1 - order)
    return PhiSpec(idx, order, prof, c)


def phi_for(params):
    """Smallest-order admissible ``phi`` whose small-``t`` decay ``t^(2 order)`` beats ``delta``."""
    order = max(1, int(math.floor(params.delta / 2.0)) + 1)
    return make_phi(params.idx, order)


@lru_cache(maxsize=32)
def _transformed(idx, f):
    return TransformedProfile(idx, f)


def convolved(idx, f, phi, t, interpolate=False):
    """Profile of ``f * phi_t`` (inverse transform of ``F f * phi_hat(t .)``)."""
    g_hat = _transformed(idx, f) * phi.dilated_transform(t)
    return TransformedProfile(idx, g_hat, interpolate=interpolate)


def convolution_norm(params, f, phi, t):
    """``||f * phi_t||_{p,k,v}`` with ``v = |x|^beta``, computed on the space side."""
    if f.is_zero():
        return 0.0
    p = params.p
    w = PowerCurve(1.0, params.beta) if params.beta else None
    # |g|^p has kinks at sign changes unless p is an even integer; adaptive
    # quadrature then needs many nodes and an interpolant of g is cheaper
    kinks = not (p == int(p) and int(p) % 2 == 0)
    g = convolved(params.idx, f, phi, t, interpolate=kinks)
    return radial_integral(params.idx, g, p, w) ** (1.0 / p)


def _end_slope(lt, ly, low):
    decade = math.log(10.0)
    mask = lt <= lt[0] + decade + 1e-12 if low else lt >= lt[-1] - decade - 1e-12
    slope, icpt = np.polyfit(lt[mask], ly[mask], 1)
    return float(slope), float(icpt)


def besov_seminorm(params, f, phi=None, t_grid=None):
    """``int_0^inf ||f * phi_t||_{p,k,v} t^-delta dt/t`` on a log grid.

    The integrand ``I(t) = ||f * phi_t|| t^-delta`` is sampled on ``t_grid``
    (default 61 log points on ``[1e-3, 1e3]``), integrated in ``log t`` with
    Simpson's rule, and extended past both ends by power laws fitted over the
    outer decades.  Convergence needs the small-``t`` slope of ``log I``
    above ``+0.05`` and the large-``t`` slope below ``-0.05``; otherwise the
    value is ``inf`` and the flag names the end.
    """
    phi = make_phi(params.idx) if phi is None else phi
    t = np.geomspace(T_LO, T_HI, T_N) if t_grid is None else np.asarray(t_grid, dtype=float)
    delta = params.delta
    if f.is_zero():
        z = np.zeros_like(t)
        return {"value": 0.0, "t": t, "norms": z, "integrand": z,
                "convergence_flags": {"low_slope": None, "high_slope": None,
                                      "converged": True, "divergent_end": None}}
    norms = np.array([convolution_norm(params, f, phi, x) for x in t])
    integrand = norms * t ** (-delta)
    lt = np.log(t)
    ly = np.log(integrand)
    s_lo, c_lo = _end_slope(lt, ly, True)
    s_hi, c_hi = _end_slope(lt, ly, False)
    flags = {"low_slope": s_lo, "high_slope": s_hi, "converged": True, "divergent_end": None}
    if not s_lo > SLOPE_MARGIN:
        flags.update(converged=False, divergent_end="small_t")
    elif not s_hi < -SLOPE_MARGIN:
        flags.update(converged=False, divergent_end="large_t")
    if not flags["converged"]:
        value = math.inf
    else:
        body = simpson(integrand, x=lt)
        head = math.exp(c_lo + s_lo * lt[0]) / s_lo
        tail = math.exp(c_hi + s_hi * lt[-1]) / -s_hi
        value = float(body + head + tail)
    return {"value": value, "t": t, "norms": norms, "integrand": integrand,
            "convergence_flags": flags}


def annulus_bound(params, f, phi, t, norm=None):
    """Both sides of the per-``t`` annulus estimate.

    ``lhs = t^2 (int_{1/(2t) <= |x| <= 1/t} |F f|^q |x|^(alpha + 2q) dnu_k)^(1/q)``,
    ``rhs = ||f * phi_t||_{p,k,v}``.  ``norm`` may pass a precomputed rhs.
    """
    if f.is_zero():
        return {"lhs": 0.0, "rhs": 0.0, "ratio": 0.0}
    q = params.q
    tf = _transformed(params.idx, f)
    w = PowerCurve(1.0, params.alpha + 2.0 * q)
    inner = radial_integral(params.idx, tf, q, w, lo=0.5 / t, hi=1.0 / t)
    lhs = t * t * inner ** (1.0 / q)
    rhs = convolution_norm(params, f, phi, t) if norm is None else norm
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return {"lhs": lhs, "rhs": rhs, "ratio": ratio}


def annulus_sup(params, f, phi, t_grid, cache=None):
    """Sup over ``t_grid`` of the annulus ratios; ``cache`` maps t to convolution norms."""
    cache = {} if cache is None else cache
    ratios = []
    for t in t_grid:
        key = float(t)
        if key not in cache:
            cache[key] = convolution_norm(params, f, phi, key)
        ratios.append(annulus_bound(params, f, phi, key, norm=cache[key])["ratio"])
    ratios = np.array(ratios)
    return float(np.max(ratios)) if ratios.size else 0.0, ratios


def verify_theorem3(params, f, phi=None, t_grid=None, annulus_grid=None):
    """Besov seminorm, ``||F f||_{1,k}`` and the annulus constant for one profile.

    ``conclusion`` is the implication "seminorm finite => L^1 norm finite".
    ``phi`` defaults to :func:`phi_for`.
    """
    phi = phi_for(params) if phi is None else phi
    ag = (np.geomspace(ANNULUS_LO, ANNULUS_HI, ANNULUS_N) if annulus_grid is None
          else np.asarray(annulus_grid, dtype=float))
    bes = besov_seminorm(params, f, phi, t_grid)
    if f.is_zero():
        l1 = 0.0
    else:
        try:
            l1 = radial_integral(params.idx, _transformed(params.idx, f), 1.0)
        except DivergenceError:
            l1 = math.inf
    cache = dict(zip(map(float, bes["t"]), bes["norms"]))
    a_sup, a_ratios = annulus_sup(params, f, phi, ag, cache)
    finite_b = math.isfinite(bes["value"])
    return {
        "besov_norm": bes["value"],
        "transform_l1_norm": l1,
        "conclusion": (not finite_b) or math.isfinite(l1),
        "annulus_sup": a_sup,
        "annulus_t": ag,
        "annulus_ratios": a_ratios,
        "besov": bes,
        "phi_order": phi.order,
        "params": params.as_dict(),
    }


def besov_report(result, f):
    """JSON-ready record: params, norms, annulus sup and the integrand curve as CSV."""
    bes = result["besov"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "norm", "integrand"])
    for row in zip(bes["t"], bes["norms"], bes["integrand"]):
        w.writerow([repr(float(x)) for x in row])
    return _num({
        "params": result["params"],
        "function": f.describe(),
        "phi_order": result["phi_order"],
        "besov_norm": result["besov_norm"],
        "l1_norm": result["transform_l1_norm"],
        "conclusion": result["conclusion"],
        "annulus_sup": result["annulus_sup"],
        "convergence_flags": bes["convergence_flags"],
        "t_curve": buf.getvalue(),
    })


def annulus_report(params, f, phi, t):
    """:func:`annulus_bound` as an :class:`InequalityReport`."""
    out = annulus_bound(params, f, phi, t)
    return InequalityReport("annulus", out["lhs"], out["rhs"],
                            dict(params.as_dict(), t=t, phi_order=phi.order))


__all__ = [
    "BesovParams", "PhiSpec", "make_phi", "phi_for", "convolved", "convolution_norm",
    "besov_seminorm", "annulus_bound", "annulus_sup", "verify_theorem3", "besov_report",
    "annulus_report",
]
