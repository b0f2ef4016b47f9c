"""Distribution functions and decreasing rearrangements of radial functions.

For a radial ``f(x) = F(|x|)`` the distribution function is
``D(s) = nu_k{|f| > s}`` and ``f*(t) = inf{s >= 0 : D(s) <= t}``.  Three
routes, chosen by the profile:

* closed forms for power profiles, indicators and step profiles;
* non-increasing ``|F|``: the level set is a ball, so ``f*(t) = |F|(rho(t))``
  with ``rho`` the radius of the ball of measure ``t``, and ``D`` comes from
  root-finding the level-set radius;
* anything else: quadrature nodes on ``(0, r_max)`` are sorted by value and
  their measures accumulated, giving step curves that reproduce every
  layer-cake integral with quadrature accuracy.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, PowerCurve, StepCurve, lower_integrals
from .errors import DivergenceError, DomainError
from .measure import (
    Indicator, PowerProfile, Product, Profile, Step, Tabulated, ball_measure, ball_radius,
    effective_support, radial_integral,
)
from .quadrature import gauss_legendre, integrate_halfline

BISECTION_STEPS = 90
SORT_ORDER = 8
TRUNCATION_SPAN = 256.0
MAX_SORT_PANELS = 1 << 16


@dataclass
class Rearrangement:
    """Distribution function ``D`` and decreasing rearrangement ``f_star``.

    ``exact`` is True for closed forms and monotone profiles; for sorted
    profiles ``domain_measure`` is the measure of the ball actually scanned
    (values beyond it are treated as zero).
    """

    D: Curve
    f_star: Curve
    source: dict = field(default_factory=dict)
    exact: bool = True
    domain_measure: float = math.inf

    def to_csv(self, path, t=None):
        t = np.geomspace(1e-3, 1e3, 121) if t is None else np.asarray(t, dtype=float)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "value"])
            for a, b in zip(t, self.f_star(t)):
                w.writerow([repr(float(a)), repr(float(b))])


class PullbackCurve(Curve):
    """``t -> |F|(rho(t))`` with ``rho(t)`` the radius of the ball of measure ``t``."""

    def __init__(self, idx, F):
        self.idx = idx
        self.F = F
        self.breakpoints = tuple(ball_measure(idx, b) for b in F.breakpoints if b > 0)
        self.scale = ball_measure(idx, F.scale)
        top = ball_measure(idx, F.support) if math.isfinite(F.support) else math.inf
        self.support = (0.0, top)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        r = ball_radius(self.idx, np.maximum(t, 0.0))
        return np.where(t < self.support[1], np.abs(self.F(r)), 0.0)


class LevelSetCurve(Curve):
    """``s -> nu_k{|f| > s}`` for non-increasing ``|F|`` by level-set root-finding."""

    def __init__(self, idx, F, top):
        self.idx = idx
        self.F = F
        self.top = float(top)  # sup |F|
        levels = []
        for b in F.breakpoints:
            for r in (b * (1 - 1e-12), b):
                v = float(np.abs(F(np.array([r])))[0])
                if 0 < v < self.top:
                    levels.append(v)
        self.breakpoints = tuple(sorted(set(levels)))
        mid = float(np.abs(F(np.array([F.scale])))[0])
        self.scale = mid if mid > 0 else 1.0
        self.support = (0.0, self.top)

    def radius(self, s):
        """Radius of the level set ``{|F| > s}`` (vectorized)."""
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        out = np.zeros_like(flat)
        act = (flat < self.top) & (flat >= 0)
        out[~act & (flat < 0)] = math.inf
        if act.any():
            out[act] = self._solve(flat[act])
        return out.reshape(s.shape)

    def _solve(self, s):
        F = self.F
        g = lambda r: np.abs(F(r))
        sc = F.scale
        hi = np.full(s.size, min(sc, F.support) if math.isfinite(F.support) else sc)
        lo = hi.copy()
        # expand the bracket: |F(lo)| > s >= |F(hi)|
        for _ in range(400):
            need = g(hi) > s
            if not need.any():
                break
            if math.isfinite(F.support):
                hi[need] = np.minimum(hi[need] * 2.0, F.support)
                at_edge = need & (hi >= F.support)
                if at_edge.any() and np.all(~need | at_edge):
                    break
            else:
                hi[need] *= 2.0
        else:
            raise DivergenceError("level set of infinite measure", side="level_set")
        for _ in range(1100):
            need = g(lo) <= s
            if not need.any():
                break
            lo[need] *= 0.5
            lo[need & (lo < 1e-300)] = 0.0
            if np.all(lo[need] == 0.0):
                break
        lo = np.minimum(lo, hi)
        geo = lo > 0
        for _ in range(BISECTION_STEPS):
            mid = np.where(geo, np.sqrt(lo * hi), 0.5 * (lo + hi))
            inside = g(mid) > s
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
            geo = lo > 0
        rho = hi
        # exact support boundary: level sets cannot extend past the support
        if math.isfinite(F.support):
            rho = np.minimum(rho, F.support)
        return rho

    def __call__(self, s):
        return ball_measure(self.idx, self.radius(s))


def _zero_rearrangement(f):
    z = PowerCurve(0.0, 0.0)
    return Rearrangement(z, z, f.describe(), True, 0.0)


def _from_values(values, measures, source, exact, domain_measure):
    """Step curves from sampled magnitudes carrying measures."""
    v = np.abs(np.asarray(values, dtype=float))
    m = np.asarray(measures, dtype=float)
    keep = (v > 0) & (m > 0)
    v, m = v[keep], m[keep]
    if v.size == 0:
        z = PowerCurve(0.0, 0.0)
        return Rearrangement(z, z, source, exact, domain_measure)
    order = np.argsort(-v, kind="stable")
    v, m = v[order], m[order]
    # merge equal levels
    uniq, start = np.unique(-v, return_index=True)
    levels = -uniq
    mass = np.add.reduceat(m, start)
    cum = np.cumsum(mass)
    # masses lost to rounding against the running total carry no measure
    grows = np.diff(np.concatenate([[0.0], cum])) > 0
    levels, cum = levels[grows], cum[grows]
    f_star = StepCurve(np.concatenate([[0.0], cum]), levels)
    # D is constant between consecutive levels (ascending)
    asc = levels[::-1]
    D_levels = cum[::-1]
    D = StepCurve(np.concatenate([[0.0], asc]), D_levels)
    return Rearrangement(D, f_star, source, exact, domain_measure)


def _step_cells(idx, edges, levels):
    meas = np.diff(ball_measure(idx, np.asarray(edges, dtype=float)))
    return np.asarray(levels, dtype=float), meas


def _sorted_nodes(idx, f):
    """Quadrature nodes of the radial measure on ``(0, r_max)`` with values."""
    R = effective_support(f, idx.N)
    truncated = not math.isfinite(R)
    if truncated:
        R = TRUNCATION_SPAN * f.scale
    h = max(f.resolution / 4.0, R / MAX_SORT_PANELS)
    n = max(1, int(math.ceil(R / h)))
    edges = np.linspace(0.0, R, n + 1)
    pts = [b for b in f.breakpoints if 0 < b < R]
    edges = np.union1d(edges, pts)
    edges = np.union1d(edges, edges[1] * 2.0 ** -np.arange(1, 30))
    x, w = gauss_legendre(SORT_ORDER)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    nodes = ((0.5 * (a + b))[:, None] + half[:, None] * x).ravel()
    wts = (half[:, None] * w).ravel()
    meas = idx.d_k * wts * nodes ** (idx.N - 1.0)
    return nodes, meas, ball_measure(idx, R) if truncated else math.inf


def is_nonincreasing(f, r_max=None, n=4097):
    """Numerical check that ``|F|`` is non-increasing (dense grid)."""
    if f.monotone:
        return True
    top = f.support if math.isfinite(f.support) else (r_max or TRUNCATION_SPAN * f.scale)
    r = np.unique(np.concatenate([np.linspace(0, top, n), top * np.geomspace(1e-8, 1, 400)]))
    v = np.abs(f(r))
    return bool(np.all(np.diff(v) <= 1e-13 * max(v.max(), 1e-300)))


def decreasing_rearrangement(idx, f, method="auto"):
    """Rearrangement of the radial function with profile ``f``.

    ``method`` is ``"auto"``, ``"monotone"`` (level-set route, requires
    non-increasing ``|F|``) or ``"sort"`` (node sorting).  Raises
    :class:`DivergenceError` if a level set has infinite measure.
    """
    src = f.describe()
    if f.is_zero():
        return _zero_rearrangement(f)
    if method == "auto":
        if isinstance(f, PowerProfile):
            return _power_rearrangement(idx, f.a, src)
        if isinstance(f, Indicator):
            m = ball_measure(idx, f.R)
            h = abs(f.height)
            return Rearrangement(StepCurve([0.0, h], [m]), StepCurve([0.0, m], [h]), src, True, m)
        if isinstance(f, Step):
            vals, meas = _step_cells(idx, f.edges, f.levels)
            return _from_values(vals, meas, src, True, ball_measure(idx, f.support))
        method = "monotone" if f.monotone else "sort"
    if method == "monotone":
        return _monotone_rearrangement(idx, f, src)
    if method == "sort":
        nodes, meas, dom = _sorted_nodes(idx, f)
        return _from_values(f(nodes), meas, src, False, dom)
    raise DomainError(f"unknown method {method!r}")


def distribution(idx, f, method="auto"):
    """Distribution function ``D`` as a curve (see :func:`decreasing_rearrangement`)."""
    return decreasing_rearrangement(idx, f, method).D


def _power_rearrangement(idx, a, src):
    if a >= 0:
        raise DivergenceError(f"|x|^{a} has level sets of infinite measure", side="level_set")
    N, dk = idx.N, idx.d_k
    D = PowerCurve(dk / N, N / a)
    f_star = PowerCurve((N / dk) ** (a / N), a / N)
    return Rearrangement(D, f_star, src, True, math.inf)


def _monotone_rearrangement(idx, f, src):
    if math.isinf(f.support):
        far = f.scale * 2.0 ** np.arange(40, 61, 4)
        tail = np.abs(f(far))
        if tail[-1] > 0 and tail[-1] >= 0.5 * tail[0]:
            raise DivergenceError("profile does not vanish at infinity", side="level_set")
    top = float(np.abs(f(np.array([0.0])))[0])
    if not math.isfinite(top) or np.isnan(top):
        top = math.inf
    D = LevelSetCurve(idx, f, top)
    f_star = PullbackCurve(idx, f)
    return Rearrangement(D, f_star, src, True, math.inf)


def layer_cake(D, p):
    """``p * int_0^inf s^(p-1) D(s) ds``."""
    if isinstance(D, StepCurve):
        if D.levels.size == 0:
            return 0.0
        lo, hi = D.edges[:-1], D.edges[1:]
        return math.fsum((D.levels * (hi ** p - lo ** p)).tolist())
    if isinstance(D, PowerCurve):
        raise DivergenceError("power distribution functions are not integrable", side="tail")
    lo, hi = D.support
    func = lambda s: p * s ** (p - 1.0) * D(s)
    return integrate_halfline(func, lo=0.0, hi=hi, breakpoints=D.breakpoints, scale=D.scale)


def rearranged_power_integral(f_star, p, weight=None):
    """``int_0^inf f*(t)^p weight(t) dt`` through the curve integrator.

    Step rearrangements are integrated cell by cell against the primitive
    of the weight, which is exact for power weights.
    """
    c = f_star.pow(p)
    if weight is None:
        return c.integral()
    if isinstance(c, StepCurve):
        if c.levels.size == 0:
            return 0.0
        nz = c.levels != 0
        if not np.any(nz):
            return 0.0
        W = lower_integrals(weight, c.edges)
        return math.fsum((c.levels[nz] * np.diff(W)[nz]).tolist())
    return (c * weight).integral()


def lp_identity_check(idx, f, p):
    """The three expressions of the layer-cake identity for ``||f||_p^p``."""
    if p < 1:
        raise DomainError("p must be >= 1")
    if f.is_zero():
        return {"space_norm": 0.0, "layer_cake": 0.0, "rearranged_norm": 0.0}
    re = decreasing_rearrangement(idx, f)
    return {
        "space_norm": radial_integral(idx, f, p),
        "layer_cake": layer_cake(re.D, p),
        "rearranged_norm": rearranged_power_integral(re.f_star, p),
    }


def reciprocal_profile(v):
    """Profile of ``1/v`` (power and tabulated weights stay closed-form)."""
    if isinstance(v, PowerProfile):
        return PowerProfile(-v.a)
    if isinstance(v, Tabulated):
        return Tabulated(v.radii, 1.0 / v.values, loglog=v.loglog)
    with np.errstate(divide="ignore"):
        return Profile(lambda r: 1.0 / v(r), support=math.inf, breakpoints=v.breakpoints,
                       scale=v.scale, monotone=False, label="reciprocal")


def hardy_littlewood(idx, f, v):
    """Both sides of ``int f v dnu_k <= int_0^inf f* v* dt`` for nonnegative ``f, v``."""
    lhs = radial_integral(idx, Product(f, v), 1.0)
    fs = decreasing_rearrangement(idx, f).f_star
    vs = decreasing_rearrangement(idx, v).f_star
    rhs = (fs * vs).integral()
    return {"lhs": lhs, "rhs": rhs}


def reverse_hardy_littlewood(idx, f, v):
    """Both sides of ``int f* [(1/v)*]^(-1) dt <= int f v dnu_k``."""
    fs = decreasing_rearrangement(idx, f).f_star
    inv = decreasing_rearrangement(idx, reciprocal_profile(v)).f_star.reciprocal()
    lhs = (fs * inv).integral()
    rhs = radial_integral(idx, Product(f, v), 1.0)
    return {"lhs": lhs, "rhs": rhs}


def hardy_lemma(f, g, phi, grid):
    """Hardy's lemma: premise ``int_0^t f <= int_0^t g`` on ``grid`` and both integrals.

    ``f, g, phi`` are curves on the half-line, ``phi`` non-negative and
    non-increasing.  Returns ``{premise, lhs, rhs}`` with ``lhs = int f phi``.
    """
    grid = np.asarray(grid, dtype=float)
    F = lower_integrals(f, grid)
    G = lower_integrals(g, grid)
    premise = bool(np.all(F <= G + 1e-12 * np.maximum(np.abs(G), 1.0)))
    return {"premise": premise, "lhs": (f * phi).integral(), "rhs": (g * phi).integral()}


def inverse_relation_violations(re, s, t, tol=1e-9):
    """Count pairs where ``f*(t) <= s`` and ``D(s) <= t`` disagree beyond ``tol``."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    fs = re.f_star(t)[None, :]
    Ds = re.D(s)[:, None]
    a = fs <= s[:, None] * (1 + tol) + tol
    b = Ds <= t[None, :] * (1 + tol) + tol
    strict_a = fs <= s[:, None] * (1 - tol) - tol
    strict_b = Ds <= t[None, :] * (1 - tol) - tol
    # a pair counts as a violation only if it fails with slack in both directions
    return int(np.sum((strict_a & ~b) | (strict_b & ~a)))

__all__ = [
    "LevelSetCurve", "PullbackCurve", "Rearrangement", "decreasing_rearrangement",
    "distribution", "hardy_lemma", "hardy_littlewood", "inverse_relation_violations",
    "is_nonincreasing", "layer_cake", "lp_identity_check", "rearranged_power_integral",
    "reciprocal_profile", "reverse_hardy_littlewood",
]
