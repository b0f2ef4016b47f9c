"""Vectorized piecewise Chebyshev evaluation."""

import numpy as np


def cheb_eval(left, right, coef, x):
    out = np.zeros(x.size)
    inside = (x >= left[0]) & (x <= right[-1])
    xi = x[inside]
    p = np.clip(np.searchsorted(left, xi, side="right") - 1, 0, left.size - 1)
    u = (2.0 * xi - left[p] - right[p]) / (right[p] - left[p])
    c = coef[p]
    b1 = np.zeros_like(u)
    b2 = np.zeros_like(u)
    for k in range(coef.shape[1] - 1, 0, -1):
        b1, b2 = 2.0 * u * b1 - b2 + c[:, k], b1
    out[inside] = u * b1 - b2 + c[:, 0]
    return out
