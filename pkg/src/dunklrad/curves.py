"""Functions on the half-line ``(0, inf)``.

Curves carry explicit breakpoints and a length scale so that integrals over
them can be split where they lose smoothness.  Power and step curves have
closed-form integrals; sampled and functional curves fall back on adaptive
quadrature with power-law extrapolation past the sampled range.
"""

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DegenerateError, DivergenceError
from .quadrature import integrate_halfline, integrate_panels


class Curve:
    """Base class: a real function on ``(0, inf)``, vectorized in ``t``."""

    breakpoints = ()
    scale = 1.0
    support = (0.0, math.inf)

    def __call__(self, t):
        raise NotImplementedError

    def integral(self, a=0.0, b=math.inf, rtol=1e-10):
        lo = max(a, self.support[0])
        hi = min(b, self.support[1])
        if not hi > lo:
            return 0.0
        return integrate_halfline(self, lo=lo, hi=hi, breakpoints=self.breakpoints,
                                  scale=self.scale, rtol=rtol)

    def pow(self, e):
        return FunctionCurve(lambda t, c=self, e=e: _safe_pow(c(t), e), self.breakpoints,
                             self.scale, self.support)

    def times_power(self, k):
        return FunctionCurve(lambda t, c=self, k=k: c(t) * np.asarray(t, float) ** k,
                             self.breakpoints, self.scale, self.support)

    def reciprocal(self):
        return FunctionCurve(lambda t, c=self: _safe_pow(c(t), -1.0), self.breakpoints,
                             self.scale, self.support)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return FunctionCurve(lambda t, c=self, k=float(other): k * c(t),
                                 self.breakpoints, self.scale, self.support)
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        return FunctionCurve(lambda t, a=self, b=other: a(t) * b(t), bps,
                             math.sqrt(self.scale * other.scale), (lo, hi))

    __rmul__ = __mul__

    def describe(self):
        return {"kind": type(self).__name__}


def _safe_pow(v, e):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(v > 0, np.abs(v) ** e, np.where(v == 0, 0.0 if e > 0 else np.inf, np.nan))
    if e == 0:
        out = np.where(v == 0, 1.0, out)
    return out


class FunctionCurve(Curve):
    """Wraps a vectorized callable."""

    def __init__(self, func, breakpoints=(), scale=1.0, support=(0.0, math.inf)):
        self._func = func
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.scale = float(scale)
        self.support = (float(support[0]), float(support[1]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.asarray(self._func(t), dtype=float)
        lo, hi = self.support
        if lo > 0 or math.isfinite(hi):
            out = np.where((t >= lo) & (t < hi), out, 0.0)
        return out


class PowerCurve(Curve):
    """``coef * t**exponent`` on ``[lo, hi)``, zero elsewhere."""

    def __init__(self, coef, exponent, lo=0.0, hi=math.inf):
        self.coef = float(coef)
        self.exponent = float(exponent)
        self.support = (float(lo), float(hi))
        self.breakpoints = tuple(b for b in self.support if 0 < b < math.inf)
        self.scale = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            v = self.coef * t ** self.exponent
        return np.where((t >= lo) & (t < hi), v, 0.0)

    def antiderivative_at(self, t):
        """Closed form of the integral from 0 to ``t`` (raises on divergence)."""
        t = np.asarray(t, dtype=float)
        if self.coef == 0.0:
            return np.zeros_like(t)
        lo, hi = self.support
        if self.exponent <= -1.0 and lo == 0.0:
            raise DivergenceError("power curve not integrable at the origin", side="origin")
        e1 = self.exponent + 1.0
        tt = np.clip(t, lo, hi)
        if e1 == 0.0:
            return self.coef * np.log(tt / lo)
        base = lo ** e1 if lo > 0 else 0.0
        return self.coef * (tt ** e1 - base) / e1

    def integral(self, a=0.0, b=math.inf, rtol=None):
        lo = max(a, self.support[0])
        hi = min(b, self.support[1])
        if not hi > lo or self.coef == 0.0:
            return 0.0
        e1 = self.exponent + 1.0
        if lo == 0.0 and e1 <= 0.0:
            raise DivergenceError("power curve not integrable at the origin", side="origin")
        if math.isinf(hi) and e1 >= 0.0:
            raise DivergenceError("power curve not integrable at infinity", side="tail")
        if e1 == 0.0:
            return self.coef * math.log(hi / lo)
        top = 0.0 if math.isinf(hi) else hi ** e1
        bottom = 0.0 if lo == 0.0 else lo ** e1
        return self.coef * (top - bottom) / e1

    def pow(self, e):
        if self.coef < 0:
            return super().pow(e)
        if self.coef == 0.0:
            return PowerCurve(0.0, 0.0, *self.support)
        return PowerCurve(self.coef ** e, self.exponent * e, *self.support)

    def times_power(self, k):
        return PowerCurve(self.coef, self.exponent + k, *self.support)

    def reciprocal(self):
        return self.pow(-1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return PowerCurve(self.coef * other, self.exponent, *self.support)
        if isinstance(other, PowerCurve):
            lo = max(self.support[0], other.support[0])
            hi = min(self.support[1], other.support[1])
            return PowerCurve(self.coef * other.coef, self.exponent + other.exponent, lo, hi)
        return super().__mul__(other)

    __rmul__ = __mul__

    def describe(self):
        return {"kind": "power", "coef": self.coef, "exponent": self.exponent,
                "support": list(self.support)}


class StepCurve(Curve):
    """Piecewise constant: ``levels[i]`` on ``[edges[i], edges[i+1])``."""

    def __init__(self, edges, levels):
        edges = np.asarray(edges, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if edges.size != levels.size + 1:
            raise ValueError("need len(edges) == len(levels) + 1")
        if edges.size > 1 and np.any(np.diff(edges) <= 0):
            raise ValueError("step edges must be strictly increasing")
        self.edges = edges
        self.levels = levels
        finite = edges[np.isfinite(edges) & (edges > 0)]
        self.breakpoints = tuple(finite.tolist())
        self.scale = float(np.median(finite)) if finite.size else 1.0
        self.support = (float(edges[0]), float(edges[-1])) if edges.size > 1 else (0.0, 0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.levels.size == 0:
            return np.zeros_like(t)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        inside = (idx >= 0) & (idx < self.levels.size)
        return np.where(inside, self.levels[np.clip(idx, 0, self.levels.size - 1)], 0.0)

    def integral(self, a=0.0, b=math.inf, rtol=None):
        if self.levels.size == 0:
            return 0.0
        lo = np.clip(self.edges[:-1], a, b)
        hi = np.clip(self.edges[1:], a, b)
        width = hi - lo
        nz = (width > 0) & (self.levels != 0)
        if np.any(np.isinf(width[nz])):
            raise DivergenceError("step curve has an infinite step", side="tail")
        return math.fsum((self.levels[nz] * width[nz]).tolist())

    def pow(self, e):
        return StepCurve(self.edges, _safe_pow(self.levels, e))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return StepCurve(self.edges, self.levels * other)
        if isinstance(other, StepCurve):
            edges = np.union1d(self.edges, other.edges)
            lo = max(self.support[0], other.support[0])
            hi = min(self.support[1], other.support[1])
            edges = edges[(edges >= lo) & (edges <= hi)]
            if edges.size < 2:
                return StepCurve([0.0], [])
            mids = _midpoints(edges)
            return StepCurve(edges, self(mids) * other(mids))
        return super().__mul__(other)

    __rmul__ = __mul__

    def describe(self):
        return {"kind": "step", "edges": self.edges.tolist(), "levels": self.levels.tolist()}


def _midpoints(edges):
    mids = 0.5 * (edges[:-1] + edges[1:])
    last_inf = np.isinf(edges[1:])
    mids[last_inf] = edges[:-1][last_inf] + 1.0
    return mids


class SampledCurve(Curve):
    """Interpolated samples with power-law extension past both ends.

    With ``loglog=True`` (strictly positive samples) interpolation is
    monotone-cubic in ``(log t, log y)``, so pure power laws are reproduced
    exactly.  Extension exponents are fitted over the outermost decade of
    samples; ``extend=False`` sets the curve to zero outside the samples.
    """

    def __init__(self, t, y, loglog=True, extend=True):
        t = np.asarray(t, dtype=float)
        y = np.asarray(y, dtype=float)
        if t.ndim != 1 or t.size < 2 or t.size != y.size:
            raise ValueError("need matching 1-d sample arrays of length >= 2")
        if np.any(np.diff(t) <= 0) or t[0] <= 0:
            raise ValueError("sample abscissae must be positive and strictly increasing")
        if loglog and np.any(y <= 0):
            loglog = False
        self.t = t
        self.y = y
        self.loglog = loglog
        self.extend = extend
        if loglog:
            self._interp = PchipInterpolator(np.log(t), np.log(y), extrapolate=False)
        else:
            self._interp = PchipInterpolator(t, y, extrapolate=False)
        self.low_exponent, self.low_coef = self._fit(t <= t[0] * 10.0)
        self.high_exponent, self.high_coef = self._fit(t >= t[-1] / 10.0)
        self.breakpoints = (float(t[0]), float(t[-1]))
        self.scale = float(math.sqrt(t[0] * t[-1]))
        self.support = (0.0, math.inf) if extend else (float(t[0]), float(t[-1]))

    def _fit(self, mask):
        tt, yy = self.t[mask], self.y[mask]
        if tt.size < 2:
            tt, yy = (self.t[:2], self.y[:2]) if mask[0] else (self.t[-2:], self.y[-2:])
        if np.any(yy <= 0):
            return 0.0, 0.0
        slope, icpt = np.polyfit(np.log(tt), np.log(yy), 1)
        return float(slope), float(math.exp(icpt))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        inside = (t >= self.t[0]) & (t <= self.t[-1])
        if self.loglog:
            out[inside] = np.exp(self._interp(np.log(t[inside])))
        else:
            out[inside] = self._interp(t[inside])
        if self.extend:
            lo = (t < self.t[0]) & (t > 0)
            hi = t > self.t[-1]
            with np.errstate(over="ignore", divide="ignore"):
                out[lo] = self.low_coef * t[lo] ** self.low_exponent
                out[hi] = self.high_coef * t[hi] ** self.high_exponent
        return out

    def describe(self):
        return {"kind": "sampled", "n": int(self.t.size), "range": [self.t[0], self.t[-1]],
                "exponents": {"low": self.low_exponent, "high": self.high_exponent}}


def power(exponent, coef=1.0):
    """Power weight ``coef * t**exponent`` on the half-line."""
    return PowerCurve(coef, exponent)


def tabulated(t, values, loglog=True):
    """Tabulated weight; log-log monotone cubic interpolation with power-law ends."""
    return SampledCurve(t, values, loglog=loglog, extend=True)


def lower_integrals(curve, s, rtol=1e-10):
    """``int_0^{s_i} curve`` for each ``s_i`` (``s`` sorted ascending)."""
    s = np.asarray(s, dtype=float)
    if isinstance(curve, PowerCurve):
        return curve.antiderivative_at(s)
    if isinstance(curve, StepCurve):
        return np.array([curve.integral(0.0, x) for x in s])
    first = curve.integral(0.0, float(s[0]), rtol=rtol)
    edges = np.union1d(s, [b for b in curve.breakpoints if s[0] < b < s[-1]])
    _, _, per = integrate_panels(curve, edges, rtol=rtol, return_panels=True)
    cum = np.concatenate([[0.0], np.cumsum(per)])
    pos = np.searchsorted(edges, s)
    return first + cum[pos]


def upper_integrals(curve, s, rtol=1e-10):
    """``int_{s_i}^inf curve`` for each ``s_i`` (``s`` sorted ascending)."""
    s = np.asarray(s, dtype=float)
    if isinstance(curve, PowerCurve):
        return np.array([curve.integral(x, math.inf) for x in s])
    if isinstance(curve, StepCurve):
        return np.array([curve.integral(x, math.inf) for x in s])
    last = curve.integral(float(s[-1]), math.inf, rtol=rtol)
    edges = np.union1d(s, [b for b in curve.breakpoints if s[0] < b < s[-1]])
    _, _, per = integrate_panels(curve, edges, rtol=rtol, return_panels=True)
    cum = np.concatenate([np.cumsum(per[::-1])[::-1], [0.0]])
    pos = np.searchsorted(edges, s)
    return last + cum[pos]


def antiderivative(curve, t_min=1e-8, t_max=1e8, per_decade=40):
    """Curve ``t -> int_0^t curve`` (closed form for power curves)."""
    if isinstance(curve, PowerCurve):
        lo, hi = curve.support
        if curve.coef == 0.0:
            return PowerCurve(0.0, 0.0)
        if lo == 0.0 and math.isinf(hi):
            e1 = curve.exponent + 1.0
            if e1 <= 0:
                raise DivergenceError("power curve not integrable at the origin", side="origin")
            return PowerCurve(curve.coef / e1, e1)
    n = int(per_decade * math.log10(t_max / t_min)) + 1
    grid = np.geomspace(t_min, t_max, n)
    vals = lower_integrals(curve, grid)
    if np.all(vals == 0):
        return PowerCurve(0.0, 0.0)
    if np.any(vals <= 0):
        raise DegenerateError("antiderivative vanishes on part of the grid")
    return SampledCurve(grid, vals, loglog=True, extend=True)
