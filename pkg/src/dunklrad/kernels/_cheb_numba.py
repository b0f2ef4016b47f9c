"""Compiled piecewise Chebyshev evaluation."""

import numpy as np
from numba import njit


@njit(cache=True)
def cheb_eval(left, right, coef, x):
    n = x.size
    npan = left.size
    deg = coef.shape[1]
    out = np.zeros(n)
    a = left[0]
    b = right[npan - 1]
    for i in range(n):
        xi = x[i]
        if xi < a or xi > b:
            continue
        # binary search for the panel with left <= xi
        lo = 0
        hi = npan - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if left[mid] <= xi:
                lo = mid
            else:
                hi = mid - 1
        p = lo
        u = (2.0 * xi - left[p] - right[p]) / (right[p] - left[p])
        b1 = 0.0
        b2 = 0.0
        for k in range(deg - 1, 0, -1):
            t = 2.0 * u * b1 - b2 + coef[p, k]
            b2 = b1
            b1 = t
        out[i] = u * b1 - b2 + coef[p, 0]
    return out
