"""Dunkl index bundle, radial profiles and radial integrals.

Every integral of a radial function against the Dunkl measure reduces to

    d_k * int_0^inf |F(r)|^p w(r) r^(N-1) dr,

with ``N = 2*gamma + d`` and ``d_k = 1 / (2^nu Gamma(nu + 1))`` (the Mehta
constant normalized to one, which makes the radial transform self-inverse).

Profiles carry two decay flags used by the transform module:

* ``smooth``: smooth as a function on R^d with rapid decay, so its transform
  decays faster than any power;
* ``fast_decay``: decays faster than any power (compact support included),
  so its transform is smooth.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .curves import Curve
from .errors import DegenerateError, DomainError
from .quadrature import integrate_halfline, integrate_tapered

ZERO_TOL = 1e-18
TAPER_START = 16.0


@dataclass(frozen=True)
class DunklIndex:
    """Dimension ``d`` and multiplicity index ``gamma``."""

    d: int
    gamma: float = 0.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.d}")
        if not self.gamma >= 0 or math.isinf(self.gamma):
            raise DomainError(f"gamma must be finite and >= 0, got {self.gamma}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def N(self):
        return 2.0 * self.gamma + self.d

    @property
    def nu(self):
        return self.gamma + self.d / 2.0 - 1.0

    @property
    def d_k(self):
        nu = self.nu
        return math.exp(-nu * math.log(2.0) - math.lgamma(nu + 1.0))

    @property
    def unit_ball(self):
        return self.d_k / self.N

    def as_dict(self):
        return {"d": self.d, "gamma": self.gamma, "N": self.N, "nu": self.nu, "d_k": self.d_k}


def ball_measure(idx, R):
    """Measure ``d_k R^N / N`` of the ball of radius ``R``."""
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise DomainError("radius must be >= 0")
    out = idx.unit_ball * R ** idx.N
    return float(out) if out.ndim == 0 else out


def ball_radius(idx, m):
    """Inverse of :func:`ball_measure`."""
    m = np.asarray(m, dtype=float)
    out = (m / idx.unit_ball) ** (1.0 / idx.N)
    return float(out) if out.ndim == 0 else out


class RadialFunction:
    """Profile ``F`` on ``[0, inf)`` of a radial function ``f(x) = F(|x|)``."""

    support = math.inf
    breakpoints = ()
    scale = 1.0
    smooth = False
    fast_decay = False
    monotone = False  # True when |F| is known to be non-increasing
    oscillatory = False  # slowly decaying with persistent oscillation

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self._eval(r)

    def _eval(self, r):
        raise NotImplementedError

    @property
    def resolution(self):
        """Largest panel width that resolves the profile."""
        return 0.5 * self.scale

    def dilate(self, lam):
        return Dilated(self, lam)

    def scaled(self, c):
        return Scaled(self, c)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Scaled(self, float(other))
        return Product(self, other)

    __rmul__ = __mul__

    def is_zero(self):
        return False

    def describe(self):
        return {"family": type(self).__name__.lower()}


class Zero(RadialFunction):
    support = 0.0
    smooth = True
    fast_decay = True
    monotone = True

    def _eval(self, r):
        return np.zeros_like(r)

    def is_zero(self):
        return True

    def describe(self):
        return {"family": "zero"}


class Gaussian(RadialFunction):
    """``amplitude * exp(-r^2 / (2 sigma^2))``."""

    smooth = True
    fast_decay = True
    monotone = True

    def __init__(self, sigma=1.0, amplitude=1.0):
        if not sigma > 0:
            raise DomainError("sigma must be > 0")
        self.sigma = float(sigma)
        self.amplitude = float(amplitude)
        self.scale = self.sigma

    def _eval(self, r):
        return self.amplitude * np.exp(-0.5 * (r / self.sigma) ** 2)

    def dilate(self, lam):
        return Gaussian(self.sigma / lam, self.amplitude)

    def describe(self):
        return {"family": "gaussian", "sigma": self.sigma, "amplitude": self.amplitude}


class Indicator(RadialFunction):
    """Indicator of the open ball of radius ``R``."""

    fast_decay = True
    monotone = True

    def __init__(self, R=1.0, height=1.0):
        if not R > 0:
            raise DomainError("radius must be > 0")
        self.R = float(R)
        self.height = float(height)
        self.support = self.R
        self.breakpoints = (self.R,)
        self.scale = self.R

    def _eval(self, r):
        return np.where(r < self.R, self.height, 0.0)

    def dilate(self, lam):
        return Indicator(self.R / lam, self.height)

    def describe(self):
        return {"family": "indicator", "R": self.R, "height": self.height}


class PowerGaussian(RadialFunction):
    """``r^a exp(-r^2 / (2 sigma^2))``."""

    fast_decay = True

    def __init__(self, a, sigma=1.0):
        if not sigma > 0:
            raise DomainError("sigma must be > 0")
        self.a = float(a)
        self.sigma = float(sigma)
        self.scale = self.sigma
        self.smooth = self.a >= 0 and self.a == int(self.a) and int(self.a) % 2 == 0
        self.monotone = self.a <= 0

    def _eval(self, r):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = r ** self.a * np.exp(-0.5 * (r / self.sigma) ** 2)
        if self.a == 0:
            out = np.exp(-0.5 * (r / self.sigma) ** 2)
        return out

    def describe(self):
        return {"family": "power_gaussian", "a": self.a, "sigma": self.sigma}


class PowerProfile(RadialFunction):
    """Pure power ``r^a`` (a weight, not an integrable function)."""

    def __init__(self, a):
        self.a = float(a)
        self.monotone = self.a <= 0

    def _eval(self, r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return r ** self.a

    def describe(self):
        return {"family": "power", "a": self.a}


class Step(RadialFunction):
    """``levels[i]`` on ``[edges[i], edges[i+1])``, zero elsewhere."""

    fast_decay = True

    def __init__(self, edges, levels):
        edges = np.asarray(edges, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if edges.ndim != 1 or edges.size != levels.size + 1 or edges.size < 2:
            raise DomainError("need len(edges) == len(levels) + 1 >= 2")
        if edges[0] < 0 or np.any(np.diff(edges) <= 0) or not np.isfinite(edges[-1]):
            raise DomainError("edges must be finite, >= 0 and strictly increasing")
        self.edges = edges
        self.levels = levels
        self.support = float(edges[-1])
        self.breakpoints = tuple(float(e) for e in edges if e > 0)
        self.scale = float(edges[-1])
        mags = np.abs(levels)
        self.monotone = bool(edges[0] == 0 and np.all(np.diff(mags) <= 0))

    @property
    def resolution(self):
        return 0.5 * self.scale

    def _eval(self, r):
        i = np.searchsorted(self.edges, r, side="right") - 1
        ok = (i >= 0) & (i < self.levels.size)
        return np.where(ok, self.levels[np.clip(i, 0, self.levels.size - 1)], 0.0)

    def describe(self):
        return {"family": "step", "edges": self.edges.tolist(), "levels": self.levels.tolist()}


class Tabulated(RadialFunction):
    """Tabulated profile with monotone cubic interpolation.

    Beyond the last radius the profile is zero; on ``(0, r_0)`` it is held at
    its first value, or extended as the power law through the first decade
    when ``loglog=True`` (log-log interpolation, exact for power laws).
    """

    def __init__(self, radii, values, loglog=False):
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        if radii.ndim != 1 or radii.size < 2 or radii.size != values.size:
            raise DomainError("need matching 1-d arrays with at least two samples")
        if radii[0] <= 0 or np.any(np.diff(radii) <= 0):
            raise DomainError("tabulated radii must be positive and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("tabulated values must be finite")
        if loglog and np.any(values <= 0):
            raise DomainError("log-log interpolation needs positive values")
        self.radii = radii
        self.values = values
        self.loglog = bool(loglog)
        self.support = float(radii[-1])
        self.breakpoints = tuple(radii.tolist())
        self.scale = float(radii[-1])
        self.fast_decay = True
        if loglog:
            self._interp = PchipInterpolator(np.log(radii), np.log(values), extrapolate=False)
            head = radii <= radii[0] * 10.0
            if head.sum() < 2:
                head[:2] = True
            self._head = np.polyfit(np.log(radii[head]), np.log(values[head]), 1)
        else:
            self._interp = PchipInterpolator(radii, values, extrapolate=False)
        mags = np.abs(values)
        self.monotone = bool(np.all(np.diff(mags) <= 0))

    def _eval(self, r):
        out = np.zeros_like(r)
        inside = (r >= self.radii[0]) & (r <= self.radii[-1])
        head = r < self.radii[0]
        if self.loglog:
            out[inside] = np.exp(self._interp(np.log(r[inside])))
            slope, icpt = self._head
            rh = r[head]
            with np.errstate(divide="ignore", over="ignore"):
                vals = np.exp(icpt + slope * np.log(np.where(rh > 0, rh, 1.0)))
            out[head] = np.where(rh > 0, vals, math.inf if slope < 0 else
                                 (0.0 if slope > 0 else math.exp(icpt)))
        else:
            out[inside] = self._interp(r[inside])
            out[head] = self.values[0]
        return out

    def describe(self):
        return {"family": "tabulated", "n": int(self.radii.size),
                "range": [float(self.radii[0]), float(self.radii[-1])], "loglog": self.loglog}


class Dilated(RadialFunction):
    """``F(lam * r)``."""

    def __init__(self, base, lam):
        if not lam > 0:
            raise DomainError("dilation factor must be > 0")
        self.base = base
        self.lam = float(lam)
        self.support = base.support / self.lam
        self.breakpoints = tuple(b / self.lam for b in base.breakpoints)
        self.scale = base.scale / self.lam
        self.smooth = base.smooth
        self.fast_decay = base.fast_decay
        self.monotone = base.monotone

    @property
    def resolution(self):
        return self.base.resolution / self.lam

    def _eval(self, r):
        return self.base(self.lam * r)

    def is_zero(self):
        return self.base.is_zero()

    def describe(self):
        return {"family": "dilated", "lambda": self.lam, "base": self.base.describe()}


class Scaled(RadialFunction):
    """``c * F(r)``."""

    def __init__(self, base, c):
        self.base = base
        self.c = float(c)
        for name in ("support", "breakpoints", "scale", "smooth", "fast_decay", "monotone"):
            setattr(self, name, getattr(base, name))

    @property
    def resolution(self):
        return self.base.resolution

    def _eval(self, r):
        return self.c * self.base(r)

    def is_zero(self):
        return self.c == 0.0 or self.base.is_zero()

    def describe(self):
        return {"family": "scaled", "c": self.c, "base": self.base.describe()}


class Product(RadialFunction):
    """Pointwise product of two profiles."""

    def __init__(self, f, g):
        self.f = f
        self.g = g
        self.support = min(f.support, g.support)
        self.breakpoints = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))
        self.scale = min(f.scale, g.scale)
        self.smooth = f.smooth and g.smooth
        self.fast_decay = f.fast_decay or g.fast_decay
        self.monotone = False

    @property
    def resolution(self):
        return min(self.f.resolution, self.g.resolution)

    def _eval(self, r):
        a = self.f(r)
        b = self.g(r)
        with np.errstate(invalid="ignore"):
            return np.where((a == 0) | (b == 0), 0.0, a * b)

    def is_zero(self):
        return self.f.is_zero() or self.g.is_zero()

    def describe(self):
        return {"family": "product", "factors": [self.f.describe(), self.g.describe()]}


class Profile(RadialFunction):
    """Wraps a vectorized callable with declared metadata."""

    def __init__(self, func, support=math.inf, breakpoints=(), scale=1.0, smooth=False,
                 fast_decay=False, monotone=False, resolution=None, label="callable"):
        self._func = func
        self.support = float(support)
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.scale = float(scale)
        self.smooth = smooth
        self.fast_decay = fast_decay
        self.monotone = monotone
        self._resolution = resolution
        self.label = label

    @property
    def resolution(self):
        return self._resolution if self._resolution else 0.5 * self.scale

    def _eval(self, r):
        out = np.asarray(self._func(r), dtype=float)
        if math.isfinite(self.support):
            out = np.where(r < self.support, out, 0.0)
        return out

    def describe(self):
        return {"family": self.label}


FAMILIES = ("gaussian", "indicator", "power_gaussian")


def make_family(name, **params):
    """Construct a named family: gaussian, indicator, power_gaussian or zero."""
    name = name.replace("-", "_").lower()
    if name == "gaussian":
        return Gaussian(params.get("sigma", 1.0))
    if name == "indicator":
        return Indicator(params.get("R", params.get("radius", 1.0)))
    if name == "power_gaussian":
        return PowerGaussian(params.get("a", 2.0), params.get("sigma", 1.0))
    if name == "zero":
        return Zero()
    raise DomainError(f"unknown family {name!r}")


def effective_support(f, N, rel=ZERO_TOL):
    """Radius beyond which ``|F(r)| r^N`` stays below ``rel`` times its peak.

    Profiles that do not decay fast return ``f.support``; fast-decaying
    profiles with a finite support return the smaller of the two.  The scan is cached on the profile instance.
    """
    if not f.fast_decay:
        return f.support
    key = ("_cutoff", float(N), rel)
    cache = f.__dict__.setdefault("_cutoff_cache", {})
    if key in cache:
        return cache[key]
    r = f.scale * 2.0 ** (np.arange(-40, 14 * 8 + 1) / 8.0)
    env = np.abs(f(r)) * r ** N
    peak = env.max()
    if peak == 0.0:
        cache[key] = 0.0
        return 0.0
    above = np.nonzero(env > rel * peak)[0]
    last = above[-1]
    if last == r.size - 1:
        cut = math.inf
    else:
        cut = float(r[last + 1])
    cut = min(cut, f.support)
    cache[key] = cut
    return cut


def _weight_values(w, r):
    if w is None:
        return 1.0
    return np.asarray(w(r), dtype=float)


def radial_integral(idx, F, p=1.0, w=None, rtol=1e-10, lo=0.0, hi=math.inf):
    """``d_k * int_lo^hi |F(r)|^p w(r) r^(N-1) dr``.

    ``w`` is ``None`` (constant one), a :class:`~dunklrad.curves.Curve` or a
    vectorized callable.  Raises :class:`DivergenceError` when the integral
    is infinite at the origin or in the tail.
    """
    if p < 1 and p != 0:
        raise DomainError("p must be >= 1")
    if F.is_zero():
        return 0.0
    N = idx.N
    top = min(hi, F.support)
    if not top > lo:
        return 0.0
    if F.fast_decay and math.isinf(top):
        top = min(top, effective_support(F, N + (p if p else 0.0), rel=1e-30))
    bps = set(F.breakpoints)
    if isinstance(w, Curve):
        bps |= set(w.breakpoints)

    def integrand(r):
        v = np.abs(F(r))
        if p != 1:
            v = v ** p
        with np.errstate(invalid="ignore", over="ignore"):
            out = v * _weight_values(w, r) * r ** (N - 1.0)
        return np.where(v == 0, 0.0, out)

    if F.oscillatory and math.isinf(top) and lo == 0.0:
        x0 = TAPER_START * F.scale
        head = integrate_halfline(integrand, lo=0.0, hi=x0, breakpoints=sorted(bps),
                                  scale=F.scale, rtol=rtol)
        val, _ = integrate_tapered(integrand, x0, F.resolution, head=head, rtol=rtol * 0.1)
    else:
        val = integrate_halfline(integrand, lo=lo, hi=top, breakpoints=sorted(bps),
                                 scale=F.scale, rtol=rtol)
    return idx.d_k * val


def lp_norm(idx, F, p, w=None, rtol=1e-10):
    """Weighted norm ``(int |f|^p w dnu_k)^(1/p)``."""
    return radial_integral(idx, F, p, w, rtol=rtol) ** (1.0 / p)


def sup_norm(F, r_max=None, n=4001):
    """Grid estimate of ``sup |F|`` (exact for monotone profiles)."""
    if F.is_zero():
        return 0.0
    if F.monotone:
        return float(abs(F(np.array([0.0]))[0]))
    top = F.support if math.isfinite(F.support) else (r_max or 40.0 * F.scale)
    r = np.linspace(0.0, top, n)
    return float(np.max(np.abs(F(r))))


def read_profile_csv(path, loglog=False):
    """Read a headerless two-column CSV (radius, value) as a tabulated profile."""
    rows = []
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line or not "".join(line).strip():
                continue
            if len(line) != 2:
                raise DomainError(f"expected two columns, got {len(line)}")
            rows.append((float(line[0]), float(line[1])))
    if len(rows) < 2:
        raise DegenerateError("profile CSV needs at least two rows")
    arr = np.array(rows)
    return Tabulated(arr[:, 0], arr[:, 1], loglog=loglog)


def write_profile_csv(path, radii, values):
    """Write a headerless two-column CSV (radius, value)."""
    with open(path, "w", newline="") as fh:
        for r, v in zip(np.asarray(radii, float), np.asarray(values, float)):
            fh.write(f"{float(r)!r},{float(v)!r}\n")


def conjugate(p):
    """Conjugate exponent ``p / (p - 1)`` (``inf`` for ``p = 1``)."""
    p = float(p)
    if p < 1:
        raise DomainError("conjugate exponent needs p >= 1")
    if p == 1.0:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)
