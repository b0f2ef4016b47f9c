"""Weight classes and boundedness conditions on the half-line.

Every condition here has the form ``sup_{s>0} Q(s) < inf`` for a quotient
``Q`` built from integrals of weight curves.  A supremum over all ``s`` cannot
be decided from samples, so each check evaluates ``Q`` on a geometric grid,
fits log-log slopes over the outermost decade at both ends and declares the
supremum infinite when ``Q`` grows towards either end.  For power weights
the integrals are closed-form and ``Q`` is an exact power of ``s``, so the
slope test is exact and run with a tight tolerance.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import (
    Curve, PowerCurve, StepCurve, SampledCurve, antiderivative, lower_integrals,
    upper_integrals,
)
from .errors import DegenerateError, DivergenceError
from .measure import PowerProfile, conjugate

GRID_LO, GRID_HI, GRID_N = 1e-4, 1e4, 81
SLOPE_TOL = 0.05
EXACT_SLOPE_TOL = 1e-9
RESIDUAL_TOL = 0.02
PITT_TOL = 1e-12

VERDICTS = {
    "sup": ("finite", "infinite"),
    "class": ("member", "non_member"),
}


def default_grid(n=GRID_N, lo=GRID_LO, hi=GRID_HI):
    return np.geomspace(lo, hi, n)


@dataclass
class SupReport:
    """Grid supremum of a quotient together with its end trends.

    ``verdict`` is ``finite``/``infinite`` for boundedness conditions and
    ``member``/``non_member`` for class membership, or ``inconclusive``.
    """

    expression_id: str
    p: float
    q: float
    grid: np.ndarray
    ratios: np.ndarray
    sup: float
    slopes: dict
    verdict: str
    reason: str = None
    exact: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def sup_estimate(self):
        return self.sup

    @property
    def bounded(self):
        return self.verdict in ("finite", "member")

    def as_dict(self):
        def num(x):
            x = float(x)
            return x if math.isfinite(x) else repr(x)

        out = {
            "expression_id": self.expression_id,
            "p": num(self.p),
            "q": None if self.q is None else num(self.q),
            "grid": [num(x) for x in self.grid],
            "ratios": [num(x) for x in self.ratios],
            "sup": num(self.sup),
            "slopes": {k: (None if v is None else num(v)) for k, v in self.slopes.items()},
            "verdict": self.verdict,
            "reason": self.reason,
            "exact": self.exact,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "ratio"])
        for a, b in zip(self.grid, self.ratios):
            w.writerow([repr(float(a)), repr(float(b))])
        return buf.getvalue()


def _end_fit(x, y):
    """Slope and max residual of a line through ``(x, y)``; None when degenerate."""
    ok = np.isfinite(y)
    if ok.sum() < 2:
        return None, 0.0
    slope, icpt = np.polyfit(x[ok], y[ok], 1)
    resid = float(np.max(np.abs(y[ok] - (slope * x[ok] + icpt))))
    return float(slope), resid


def trend_verdict(grid, ratios, exact=False, kind="sup"):
    """Verdict, reason and end slopes for a sampled quotient.

    A vanishing end (ratios exactly zero) counts as bounded there.  An end
    whose log-log profile is not close to a line and does not clearly decay
    makes the verdict inconclusive.
    """
    good, bad = VERDICTS[kind]
    grid = np.asarray(grid, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    if np.any(np.isnan(ratios)):
        return "inconclusive", "undefined_ratio", {"low": None, "high": None}
    if np.any(np.isinf(ratios)):
        return bad, "unbounded_ratio", {"low": None, "high": None}
    if np.all(ratios == 0):
        return good, None, {"low": 0.0, "high": 0.0}
    tol = EXACT_SLOPE_TOL if exact else SLOPE_TOL
    lx = np.log(grid)
    with np.errstate(divide="ignore"):
        ly = np.where(ratios > 0, np.log(np.where(ratios > 0, ratios, 1.0)), -np.inf)
    decade = math.log(10.0)
    low = lx <= lx[0] + decade + 1e-12
    high = lx >= lx[-1] - decade - 1e-12
    s_low, r_low = _end_fit(lx[low], ly[low])
    s_high, r_high = _end_fit(lx[high], ly[high])
    slopes = {"low": s_low, "high": s_high}
    if s_high is not None and s_high > tol:
        return bad, "growth_at_large_s", slopes
    if s_low is not None and s_low < -tol:
        return bad, "growth_at_small_s", slopes
    if not exact:
        if s_high is not None and r_high > RESIDUAL_TOL and s_high > -tol:
            return "inconclusive", "not_power_like_at_large_s", slopes
        if s_low is not None and r_low > RESIDUAL_TOL and s_low < tol:
            return "inconclusive", "not_power_like_at_small_s", slopes
    return good, None, slopes


def _reason(err):
    if isinstance(err, DivergenceError):
        return {"tail": "divergent_tail", "origin": "divergent_origin",
                "level_set": "divergent_level_set"}.get(err.side, "divergent")
    return "degenerate"


def _is_power(*curves):
    return all(isinstance(c, PowerCurve) and c.support == (0.0, math.inf) for c in curves)


def _report(expression_id, p, q, grid, compute, curves, kind="sup", extra=None):
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    exact = _is_power(*curves)
    try:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratios = np.asarray(compute(grid), dtype=float)
    except (DivergenceError, DegenerateError) as err:
        bad = VERDICTS[kind][1]
        ratios = np.full(grid.shape, np.inf)
        return SupReport(expression_id, p, q, grid, ratios, math.inf,
                         {"low": None, "high": None}, bad, _reason(err), exact, extra or {})
    verdict, reason, slopes = trend_verdict(grid, ratios, exact, kind)
    sup = float(np.max(ratios)) if not np.any(np.isnan(ratios)) else math.nan
    return SupReport(expression_id, p, q, grid, ratios, sup, slopes, verdict, reason,
                     exact, extra or {})


def _positive(values, what):
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0):
        raise DegenerateError(f"{what} vanishes on part of the grid")
    return values


def _lower_at(curve, x):
    """``int_0^x curve`` at unsorted points ``x``."""
    order = np.argsort(x)
    out = np.empty_like(x)
    out[order] = lower_integrals(curve, x[order])
    return out


def _is_zero(curve):
    if isinstance(curve, PowerCurve):
        return curve.coef == 0.0
    if isinstance(curve, StepCurve):
        return not np.any(curve.levels)
    return False


def _averaged(curve):
    """The Hardy average ``t -> (1/t) int_0^t curve``."""
    return antiderivative(curve).times_power(-1.0)


# -- B_p class --------------------------------------------------------------

def bp_ratio(mu, p, s):
    """``s^p int_s^inf mu(t) t^-p dt / int_0^s mu`` (closed form for powers).

    Raises :class:`DivergenceError` or :class:`DegenerateError`.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    order = np.argsort(s)
    ss = s[order]
    top = upper_integrals(mu.times_power(-p), ss)
    bottom = _positive(lower_integrals(mu, ss), "int_0^s mu")
    out = np.empty_like(s)
    out[order] = ss ** p * top / bottom
    return float(out[0]) if out.size == 1 else out


def bp_check(mu, p, grid=None):
    """Membership of ``mu`` in ``B_p`` from the grid quotient of :func:`bp_ratio`."""
    p = float(p)
    return _report("bp", p, None, grid, lambda s: bp_ratio(mu, p, s), [mu], kind="class")


def bp_equivalent_condition(v, p, grid=None):
    """Membership of ``v`` in ``B_p`` through the equivalent averaged quotient.

    ``(1/s) (int_0^s v)^(1/p) (int_0^s ((1/t) int_0^t v)^(1-p') dt)^(1/p')``.
    """
    p = float(p)
    pc = conjugate(p)

    def compute(s):
        head = _positive(lower_integrals(v, s), "int_0^s v")
        inner = lower_integrals(_averaged(v).pow(1.0 - pc), s)
        return head ** (1.0 / p) * inner ** (1.0 / pc) / s

    return _report("bp_equivalent", p, None, grid, compute, [v], kind="class")


# -- Hardy operator conditions ---------------------------------------------

def _check_pq(p, q):
    if not 1.0 < p <= q < math.inf:
        raise ValueError(f"need 1 < p <= q < inf, got p={p}, q={q}")


def hardy_condition_A(mu, th, p, q, grid=None):
    """``sup_s (int_0^s mu)^(1/q) (int_0^s th)^(-1/p)``."""
    p, q = float(p), float(q)
    _check_pq(p, q)

    def compute(s):
        if _is_zero(mu):
            return np.zeros_like(s)
        a = lower_integrals(mu, s)
        b = _positive(lower_integrals(th, s), "int_0^s theta")
        return a ** (1.0 / q) * b ** (-1.0 / p)

    return _report("hardy_A", p, q, grid, compute, [mu, th])


def hardy_condition_B(mu, th, p, q, grid=None):
    """``sup_s (int_s^inf mu t^-q)^(1/q) (int_0^s (Th)^(-p') th)^(1/p')``.

    ``Th(t) = (1/t) int_0^t th`` is the Hardy average of ``th``.
    """
    p, q = float(p), float(q)
    _check_pq(p, q)
    pc = conjugate(p)

    def compute(s):
        if _is_zero(mu):
            return np.zeros_like(s)
        a = upper_integrals(mu.times_power(-q), s)
        b = lower_integrals(_averaged(th).pow(-pc) * th, s)
        return a ** (1.0 / q) * b ** (1.0 / pc)

    return _report("hardy_B", p, q, grid, compute, [mu, th])


# -- transform boundedness conditions ---------------------------------------

def theorem1_condition(idx, u_star, inv_v_star_inv, p, q, grid=None):
    """``sup_s s (int_0^{1/s} u*)^(1/q) (int_0^s [(1/v)*]^-1)^(-1/p)``.

    ``u_star`` is ``u*`` and ``inv_v_star_inv`` is ``[(1/v)*]^-1``.  This is
    the necessary and sufficient condition for the rearranged transform
    inequality with ``q >= 2``.
    """
    p, q = float(p), float(q)
    _check_pq(p, q)
    if q < 2:
        raise ValueError("theorem1_condition needs q >= 2")

    def compute(s):
        if _is_zero(u_star):
            return np.zeros_like(s)
        a = _lower_at(u_star, 1.0 / s)
        b = _positive(lower_integrals(inv_v_star_inv, s), "int_0^s [(1/v)*]^-1")
        return s * a ** (1.0 / q) * b ** (-1.0 / p)

    return _report("theorem1", p, q, grid, compute, [u_star, inv_v_star_inv],
                   extra={"N": idx.N})


def theorem2_condition_ii(idx, u_star, inv_v_star, p, q, grid=None):
    """``sup_s (1/s) (int_0^{1/s} (u*)^(1-q'))^(-1/q') (int_0^s [(1/v)*]^(p'-1))^(1/p')``.

    The boundedness condition for ``1 < p <= q < 2``; ``inv_v_star`` is
    ``(1/v)*``.
    """
    p, q = float(p), float(q)
    _check_pq(p, q)
    if q >= 2:
        raise ValueError("theorem2_condition_ii needs q < 2")
    pc, qc = conjugate(p), conjugate(q)

    def compute(s):
        if _is_zero(inv_v_star):
            return np.zeros_like(s)
        a = _positive(_lower_at(u_star.pow(1.0 - qc), 1.0 / s), "int_0^{1/s} (u*)^(1-q')")
        b = lower_integrals(inv_v_star.pow(pc - 1.0), s)
        return a ** (-1.0 / qc) * b ** (1.0 / pc) / s

    return _report("theorem2_ii", p, q, grid, compute, [u_star, inv_v_star],
                   extra={"N": idx.N})


# -- power weights ----------------------------------------------------------

def power_weight_star(idx, exponent):
    """Rearrangement of ``|x|^exponent`` (``exponent < 0``): ``(N/d_k)^(a/N) t^(a/N)``.

    ``exponent == 0`` gives the constant 1; positive exponents raise
    :class:`DivergenceError` (level sets of infinite measure).
    """
    a = float(exponent)
    if a == 0.0:
        return PowerCurve(1.0, 0.0)
    if a > 0.0:
        raise DivergenceError(f"|x|^{a} has level sets of infinite measure", side="level_set")
    N = idx.N
    return PowerCurve((N / idx.d_k) ** (a / N), a / N)


def pitt_weight_curves(idx, alpha, beta):
    """``(u*, (1/v)*)`` for ``u = |x|^alpha``, ``v = |x|^beta``."""
    return power_weight_star(idx, alpha), power_weight_star(idx, -beta)


def theorem1_condition_power(idx, alpha, beta, p, q, grid=None):
    """:func:`theorem1_condition` for power weights; divergent rearrangements fold into the verdict."""
    try:
        us, ivs = pitt_weight_curves(idx, alpha, beta)
    except DivergenceError as err:
        grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
        return SupReport("theorem1", float(p), float(q), grid, np.full(grid.shape, np.inf),
                         math.inf, {"low": None, "high": None}, "infinite", _reason(err), True,
                         {"N": idx.N})
    return theorem1_condition(idx, us, ivs.reciprocal(), p, q, grid)


def theorem2_condition_ii_power(idx, alpha, beta, p, q, grid=None):
    """:func:`theorem2_condition_ii` for power weights."""
    try:
        us, ivs = pitt_weight_curves(idx, alpha, beta)
    except DivergenceError as err:
        grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
        return SupReport("theorem2_ii", float(p), float(q), grid, np.full(grid.shape, np.inf),
                         math.inf, {"low": None, "high": None}, "infinite", _reason(err), True,
                         {"N": idx.N})
    return theorem2_condition_ii(idx, us, ivs, p, q, grid)


def pitt_exponent(idx, alpha, beta, p, q):
    """Exponent ``e`` with ``theorem1 quotient = const * s^e`` for power weights."""
    N = idx.N
    return 1.0 - (alpha / N + 1.0) / q - (beta / N + 1.0) / p


def pitt_index_check(idx, alpha, beta, p, q):
    """Admissibility of ``(alpha, beta, p, q)`` for the power-weight transform inequality.

    Returns ``{"admissible", "constraint_residual", "violations"}`` where the
    residual is ``(alpha/q + beta/p)/N - (1 - 1/p - 1/q)`` and
    ``violations`` names every failed condition.
    """
    N = idx.N
    alpha, beta, p, q = float(alpha), float(beta), float(p), float(q)
    residual = (alpha / q + beta / p) / N - (1.0 - 1.0 / p - 1.0 / q)
    violations = []
    if not 1.0 < p <= q < math.inf:
        violations.append("1 < p <= q < inf")
    if not -N < alpha < 0.0:
        violations.append(f"-N < alpha < 0 (N={N:g})")
    if not 0.0 < beta < N * (p - 1.0):
        violations.append(f"0 < beta < N(p-1) = {N * (p - 1.0):g}")
    if not abs(residual) <= PITT_TOL:
        violations.append(f"(alpha/q + beta/p)/N = 1 - 1/p - 1/q (residual {residual:.6g})")
    return {"admissible": not violations, "constraint_residual": residual,
            "violations": violations}


def pitt_alpha(idx, beta, p, q):
    """The ``alpha`` solving the index constraint for given ``beta, p, q``."""
    return q * (idx.N * (1.0 - 1.0 / p - 1.0 / q) - beta / p)


# -- weight specifications --------------------------------------------------

def parse_weight(text):
    """Weight curve from ``power:<a>`` or ``tabulated:<csv path>`` (rows ``t,value``)."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "power":
        return PowerCurve(1.0, float(arg))
    if kind == "tabulated":
        data = np.loadtxt(arg, delimiter=",", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError("tabulated weight needs two columns t,value")
        if np.any(data[:, 1] < 0):
            raise ValueError("weights must be non-negative")
        return SampledCurve(data[:, 0], data[:, 1], loglog=True)
    raise ValueError(f"unknown weight kind {kind!r}; expected power:<a> or tabulated:<path>")


def profile_of(curve):
    """Radial profile ``|x|^a`` matching a power weight curve (for rearrangements)."""
    if isinstance(curve, PowerCurve) and curve.coef == 1.0:
        return PowerProfile(curve.exponent)
    raise ValueError("only unit power weights have a radial profile")


__all__ = [
    "Curve", "SupReport", "trend_verdict", "default_grid",
    "bp_ratio", "bp_check", "bp_equivalent_condition",
    "hardy_condition_A", "hardy_condition_B",
    "theorem1_condition", "theorem2_condition_ii",
    "theorem1_condition_power", "theorem2_condition_ii_power",
    "power_weight_star", "pitt_weight_curves", "pitt_exponent", "pitt_index_check",
    "pitt_alpha", "parse_weight", "profile_of",
]
