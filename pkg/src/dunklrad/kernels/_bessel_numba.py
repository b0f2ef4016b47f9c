"""Compiled Bessel kernels (scalar loops under numba)."""

import math

import numpy as np
from numba import njit

from ._params import ASYMPTOTIC_X, MILLER_EXTRA, MILLER_SQRT, RESCALE, SERIES_Y


@njit(cache=True)
def _series_ok(nu, x):
    return 0.25 * x * x <= max(SERIES_Y, nu + 1.0)


@njit(cache=True)
def _jnorm_series(nu, x):
    # sum_k (-x^2/4)^k / (k! (nu+1)_k)
    y = 0.25 * x * x
    term = 1.0
    total = 1.0
    abs_total = 1.0
    k = 1
    while k < 400:
        term *= -y / (k * (nu + k))
        total += term
        abs_total += abs(term)
        if k * (nu + k) > y and abs(term) < 1e-17 * abs_total:
            break
        k += 1
    return total


@njit(cache=True)
def _hankel(mu, x):
    m4 = 4.0 * mu * mu
    p = 1.0
    q = 0.0
    term = 1.0
    prev = 1.0e300
    k = 1
    while k < 200:
        odd = 2.0 * k - 1.0
        term *= (m4 - odd * odd) / (k * 8.0 * x)
        a = abs(term)
        if a == 0.0 or a > prev:
            break
        if k % 2 == 1:
            if (k // 2) % 2 == 0:
                q += term
            else:
                q -= term
        else:
            if (k // 2) % 2 == 1:
                p -= term
            else:
                p += term
        if a < 1e-17:
            break
        prev = a
        k += 1
    omega = x - (0.5 * mu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(omega) - q * math.sin(omega))


@njit(cache=True)
def _miller(nu, x):
    n = int(math.floor(nu + 0.5))
    mu = nu - n
    big = max(nu, x)
    half = int(0.5 * (big + MILLER_EXTRA + MILLER_SQRT * math.sqrt(big))) + 1
    top = 2 * half
    kk = half
    c = (mu + 2.0 * kk) * math.exp(math.lgamma(mu + kk) - math.lgamma(kk + 1.0))
    b_next = 0.0
    b = 1.0
    total = 0.0
    res = 0.0
    m = top
    while m >= 0:
        if m == n:
            res = b
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
            if abs(b) > RESCALE:
                b /= RESCALE
                b_next /= RESCALE
                total /= RESCALE
                res /= RESCALE
        m -= 1
    return math.exp(mu * math.log(0.5 * x)) * res / total


@njit(cache=True)
def _forward(nu, x):
    n = int(math.floor(nu + 0.5))
    mu = nu - n
    j0 = _hankel(mu, x)
    if n == 0:
        return j0
    j1 = _hankel(mu + 1.0, x)
    for k in range(1, n):
        j2 = 2.0 * (mu + k) / x * j1 - j0
        j0 = j1
        j1 = j2
    return j1


@njit(cache=True)
def _log_scale(nu, x):
    # log of (x/2)^nu / Gamma(nu+1)
    return nu * math.log(0.5 * x) - math.lgamma(nu + 1.0)


@njit(cache=True)
def besselj_scalar(nu, x):
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        return math.inf
    if _series_ok(nu, x):
        return _jnorm_series(nu, x) * math.exp(_log_scale(nu, x))
    if x >= ASYMPTOTIC_X and x >= nu:
        return _forward(nu, x)
    return _miller(nu, x)


@njit(cache=True)
def jnorm_scalar(nu, x):
    if x == 0.0:
        return 1.0
    if _series_ok(nu, x):
        return _jnorm_series(nu, x)
    if x >= ASYMPTOTIC_X and x >= nu:
        val = _forward(nu, x)
    else:
        val = _miller(nu, x)
    return val * math.exp(-_log_scale(nu, x))


@njit(cache=True)
def besselj(nu, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = besselj_scalar(nu, x[i])
    return out


@njit(cache=True)
def jnorm(nu, x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = jnorm_scalar(nu, x[i])
    return out
