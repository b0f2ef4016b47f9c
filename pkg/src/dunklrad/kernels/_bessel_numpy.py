"""Vectorized numpy Bessel kernels.

Same regions and recurrences as the compiled backend, written with array
masks instead of scalar loops.
"""

import math

import numpy as np

from ._params import ASYMPTOTIC_X, MILLER_EXTRA, MILLER_SQRT, RESCALE, SERIES_Y


def _series_mask(nu, x):
    return 0.25 * x * x <= max(SERIES_Y, nu + 1.0)


def _jnorm_series(nu, x):
    y = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    abs_total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    k = 1
    while k < 400 and active.any():
        term = np.where(active, term * (-y / (k * (nu + k))), 0.0)
        total += term
        abs_total += np.abs(term)
        done = (k * (nu + k) > y) & (np.abs(term) < 1e-17 * abs_total)
        active &= ~done
        k += 1
    return total


def _hankel(mu, x):
    m4 = 4.0 * mu * mu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, 1e300)
    active = np.ones(x.shape, dtype=bool)
    k = 1
    while k < 200 and active.any():
        odd = 2.0 * k - 1.0
        term = term * ((m4 - odd * odd) / (k * 8.0 * x))
        a = np.abs(term)
        stop = (a == 0.0) | (a > prev)
        active &= ~stop
        t = np.where(active, term, 0.0)
        if k % 2 == 1:
            q += t if (k // 2) % 2 == 0 else -t
        else:
            p += -t if (k // 2) % 2 == 1 else t
        active &= a >= 1e-17
        prev = a
        k += 1
    omega = x - (0.5 * mu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(omega) - q * np.sin(omega))


def _miller(nu, x):
    n = int(math.floor(nu + 0.5))
    mu = nu - n
    big = max(nu, float(x.max()))
    half = int(0.5 * (big + MILLER_EXTRA + MILLER_SQRT * math.sqrt(big))) + 1
    top = 2 * half
    kk = half
    c = (mu + 2.0 * kk) * math.exp(math.lgamma(mu + kk) - math.lgamma(kk + 1.0))
    b_next = np.zeros_like(x)
    b = np.ones_like(x)
    total = np.zeros_like(x)
    res = np.zeros_like(x)
    for m in range(top, -1, -1):
        if m == n:
            res = b.copy()
        if m % 2 == 0:
            kk = m // 2
            if kk == 0:
                c = math.gamma(mu + 1.0)
            elif kk == 1:
                c = (mu + 2.0) * math.gamma(mu + 1.0)
            total += c * b
            if kk >= 2:
                c *= (mu + 2.0 * kk - 2.0) * kk / ((mu + 2.0 * kk) * (mu + kk - 1.0))
        if m > 0:
            b_prev = 2.0 * (mu + m) / x * b - b_next
            b_next = b
            b = b_prev
            big_mask = np.abs(b) > RESCALE
            if big_mask.any():
                scale = np.where(big_mask, 1.0 / RESCALE, 1.0)
                b = b * scale
                b_next = b_next * scale
                total = total * scale
                res = res * scale
    return np.exp(mu * np.log(0.5 * x)) * res / total


def _forward(nu, x):
    n = int(math.floor(nu + 0.5))
    mu = nu - n
    j0 = _hankel(mu, x)
    if n == 0:
        return j0
    j1 = _hankel(mu + 1.0, x)
    for k in range(1, n):
        j0, j1 = j1, 2.0 * (mu + k) / x * j1 - j0
    return j1


def _log_scale(nu, x):
    return nu * np.log(0.5 * x) - math.lgamma(nu + 1.0)


def _regions(nu, x):
    zero = x == 0.0
    ser = ~zero & _series_mask(nu, x)
    asy = ~zero & ~ser & (x >= ASYMPTOTIC_X) & (x >= nu)
    mil = ~zero & ~ser & ~asy
    return zero, ser, asy, mil


def besselj(nu, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    zero, ser, asy, mil = _regions(nu, x)
    if nu == 0.0:
        out[zero] = 1.0
    else:
        out[zero] = 0.0 if nu > 0.0 else math.inf
    if ser.any():
        xs = x[ser]
        out[ser] = _jnorm_series(nu, xs) * np.exp(_log_scale(nu, xs))
    if asy.any():
        out[asy] = _forward(nu, x[asy])
    if mil.any():
        out[mil] = _miller(nu, x[mil])
    return out


def jnorm(nu, x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    zero, ser, asy, mil = _regions(nu, x)
    out[zero] = 1.0
    if ser.any():
        out[ser] = _jnorm_series(nu, x[ser])
    if asy.any():
        xa = x[asy]
        out[asy] = _forward(nu, xa) * np.exp(-_log_scale(nu, xa))
    if mil.any():
        xm = x[mil]
        out[mil] = _miller(nu, xm) * np.exp(-_log_scale(nu, xm))
    return out
