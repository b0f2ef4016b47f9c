"""Gauss-Legendre quadrature on panels and on the half-line.

All integrands are vectorized callables ``f(x: ndarray) -> ndarray``.  Panel
work is batched so that one call of ``f`` covers every node of a refinement
round; this matters when ``f`` is itself a transform evaluated by quadrature.
"""

import math
from functools import lru_cache

import numpy as np

from .errors import DivergenceError

DEFAULT_ORDER = 15


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights on [-1, 1] (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def panel_sums(func, a, b, order=DEFAULT_ORDER):
    """Fixed-order Gauss-Legendre estimate on each panel ``[a[i], b[i]]``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return np.zeros(0)
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(func(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return half * (vals @ w)


def integrate_panels(func, edges, rtol=1e-11, atol=0.0, order=DEFAULT_ORDER,
                     max_rounds=60, return_panels=False):
    """Adaptive integration over consecutive panels given by ``edges``.

    Each panel is compared against the sum over its two halves; panels whose
    error dominates are bisected until the summed error estimate drops below
    ``max(atol, rtol * sum|I_panel|)``.

    Returns ``(value, error)``, or ``(value, error, per_panel)`` where
    ``per_panel`` aggregates the refined estimates back onto the input panels.
    """
    edges = np.asarray(edges, dtype=float)
    n0 = edges.size - 1
    if n0 <= 0:
        out = (0.0, 0.0, np.zeros(0)) if return_panels else (0.0, 0.0)
        return out
    a = edges[:-1].copy()
    b = edges[1:].copy()
    owner = np.arange(n0)

    def estimate(a, b):
        m = 0.5 * (a + b)
        both = panel_sums(func, np.concatenate([a, a, m]), np.concatenate([b, m, b]), order)
        k = a.size
        coarse, left, right = both[:k], both[k:2 * k], both[2 * k:]
        fine = left + right
        return fine, np.abs(fine - coarse)

    val, err = estimate(a, b)
    for _ in range(max_rounds):
        scale = np.abs(val).sum()
        target = max(atol, rtol * scale)
        total_err = err.sum()
        if total_err <= target or not np.isfinite(total_err):
            break
        cut = max(0.5 * target / max(err.size, 1), 1e-300)
        split = err > cut
        # never split below resolvable width
        split &= (b - a) > 64 * np.spacing(np.maximum(np.abs(a), np.abs(b)))
        if not split.any():
            break
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nown = np.concatenate([owner[split], owner[split]])
        nval, nerr = estimate(na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], nown])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
    # deterministic summation order: by panel position
    order_idx = np.lexsort((a, owner))
    val = val[order_idx]
    err = err[order_idx]
    owner = owner[order_idx]
    total = math.fsum(val)
    if return_panels:
        per = np.zeros(n0)
        np.add.at(per, owner, val)
        return total, float(err.sum()), per
    return total, float(err.sum())


def _geometric_remainder(sums):
    """Extrapolated remainder of a geometrically decaying panel sequence."""
    s = np.abs(np.asarray(sums))
    if s.size < 3 or s[-1] == 0.0:
        return 0.0, 0.0, 0.0
    prev = s[-2]
    if prev == 0.0:
        return 0.0, 0.0, 0.0
    rho = s[-1] / prev
    rho2 = s[-2] / s[-3] if s[-3] > 0 else rho
    sign = math.copysign(1.0, sums[-1])
    if rho >= 1.0:
        return math.inf, math.inf, rho
    rem = sign * s[-1] * rho / (1.0 - rho)
    if rho2 < 1.0:
        rem2 = sign * s[-1] * rho2 / (1.0 - rho2)
        unc = abs(rem - rem2)
    else:
        unc = abs(rem)
    return rem, unc, rho


def _dyadic_run(func, start, direction, target_fn, rtol, order, max_panels, batch=8,
                side="tail"):
    """Integrate over dyadic panels from ``start`` towards 0 or infinity."""
    sums = []
    k = 0
    factor = 2.0
    rem = unc = 0.0
    while k < max_panels:
        # later batches are shorter: far panels are often the costly ones
        if k >= 2 * batch:
            batch = max(2, batch // 2)
        ks = np.arange(k, k + batch)
        if direction > 0:
            edges = start * factor ** np.concatenate([ks, [k + batch]])
        else:
            edges = start * factor ** (-np.concatenate([[k], ks + 1]))[::-1]
        # absolute target tied to the running total keeps tiny tail batches
        # from chasing rounding noise
        floor = 0.01 * target_fn(math.fsum(sums)) if sums else 0.0
        _, _, per = integrate_panels(func, edges, rtol=rtol * 0.1, atol=floor, order=order,
                                     return_panels=True)
        if direction < 0:
            per = per[::-1]
        sums.extend(per.tolist())
        k += batch
        done = math.fsum(sums)
        target = target_fn(done)
        last = np.abs(sums[-batch:])
        if last.max() == 0.0:
            return done, 0.0
        rem, unc, rho = _geometric_remainder(sums)
        if not math.isfinite(rem):
            if k >= 32:
                raise DivergenceError(
                    f"panel sums do not decay towards {'infinity' if direction > 0 else 'the origin'}",
                    side=side,
                )
            continue
        # slowly decaying sequences (rho close to 1) are treated as divergent
        if rho > 0.97 and k >= 48:
            raise DivergenceError(
                f"panel sums decay too slowly (ratio {rho:.3f}) towards "
                f"{'infinity' if direction > 0 else 'the origin'}",
                side=side,
            )
        if abs(last[-1]) + abs(rem) <= target or (unc <= 0.5 * target and rho < 0.9):
            return done + rem, unc
    if unc < 1e-3 * abs(math.fsum(sums) + rem):
        return math.fsum(sums) + rem, unc
    raise DivergenceError(
        f"no convergence after {max_panels} dyadic panels towards "
        f"{'infinity' if direction > 0 else 'the origin'}",
        side=side,
    )


def integrate_halfline(func, lo=0.0, hi=math.inf, breakpoints=(), scale=1.0, rtol=1e-10,
                       atol=0.0, order=DEFAULT_ORDER, max_panels=(1024, 160),
                       full_output=False):
    """Integrate ``func`` over ``(lo, hi)`` with ``0 <= lo < hi <= inf``.

    A core region spanning ``scale`` and every breakpoint is split into
    dyadic panels; beyond it dyadic panels march towards the origin (when
    ``lo == 0``) and towards infinity (when ``hi == inf``) until the panel
    sums become negligible, with a geometric extrapolation of the remainder.

    Raises :class:`DivergenceError` when the panel sums fail to decay.
    """
    if not hi > lo:
        return (0.0, 0.0) if full_output else 0.0
    pts = [float(p) for p in breakpoints if lo < p < hi and math.isfinite(p)]
    scale = float(scale) if scale and scale > 0 else 1.0
    anchors = pts + ([scale] if lo < scale < hi else [])
    if lo > 0:
        a_core = lo
    else:
        a_core = min(anchors) / 2.0 if anchors else min(scale, hi / 2.0)
    if math.isfinite(hi):
        b_core = hi
    else:
        b_core = max(anchors + [a_core]) * 2.0
    n_oct = max(1, int(math.ceil(math.log2(b_core / a_core))))
    core = a_core * 2.0 ** np.arange(n_oct + 1)
    core = core[core < b_core]
    edges = np.unique(np.concatenate([core, [b_core], pts]))
    edges = edges[(edges >= a_core) & (edges <= b_core)]
    core_val, core_err = integrate_panels(func, edges, rtol=rtol * 0.1, atol=atol, order=order)

    def target_fn(extra):
        return max(atol, rtol * abs(core_val + extra) * 0.25)

    total = core_val
    err = core_err
    if lo == 0.0:
        val, e = _dyadic_run(func, a_core, -1, lambda x: target_fn(x), rtol, order,
                             max_panels[0], side="origin")
        total += val
        err += e
    if math.isinf(hi):
        val, e = _dyadic_run(func, b_core, +1, lambda x: target_fn(x + total - core_val),
                             rtol, order, max_panels[1], side="tail")
        total += val
        err += e
    return (total, err) if full_output else total


def taper(u):
    """Smooth cutoff: one for ``u <= 1``, zero for ``u >= 2``, C-infinity between."""
    x = np.clip(np.asarray(u, dtype=float) - 1.0, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x < 1.0, np.exp(-1.0 / np.where(x < 1.0, 1.0 - x, 1.0)), 0.0)
        b = np.where(x > 0.0, np.exp(-1.0 / np.where(x > 0.0, x, 1.0)), 0.0)
    return a / (a + b)


def _aitken(seq):
    seq = np.asarray(seq, dtype=float)
    d1 = seq[1:-1] - seq[:-2]
    d2 = seq[2:] - seq[1:-1]
    den = d2 - d1
    safe = np.abs(den) > 1e-300
    out = seq[2:].copy()
    ratio = np.where(safe, d2 / np.where(safe, d1, 1.0), 0.0)
    # only accelerate monotone geometric-looking differences
    use = safe & (np.abs(d1) > 0) & (ratio > 0) & (ratio < 1)
    out[use] = seq[2:][use] - d2[use] ** 2 / den[use]
    return out


def integrate_tapered(func, x0, width, head=None, levels=7, rtol=1e-11, order=DEFAULT_ORDER):
    """Integral over ``(0, inf)`` of a slowly decaying oscillatory integrand.

    The integral is cut off smoothly at ``X = x0 * 2**j`` (see :func:`taper`);
    the smooth cutoff suppresses oscillatory remainders, leaving an
    asymptotic series in inverse powers of ``X`` that iterated Aitken
    extrapolation removes.  ``head`` is the integral over ``(0, x0)`` when
    already known; ``width`` bounds the initial panel width in the tail.

    Returns ``(value, uncertainty)``.
    """
    if head is None:
        head = integrate_halfline(func, lo=0.0, hi=x0, scale=min(x0, 1.0), rtol=rtol)
    partial = head
    seq = []
    for j in range(levels):
        X = x0 * 2.0 ** j
        n = max(1, int(math.ceil(X / width)))
        edges = np.linspace(X, 2.0 * X, n + 1)
        tap, _ = integrate_panels(lambda s, X=X: func(s) * taper(s / X), edges, rtol=rtol,
                                  order=order)
        seq.append(partial + tap)
        if j < levels - 1:
            plain, _ = integrate_panels(func, edges, rtol=rtol, order=order)
            partial += plain
    cur = np.array(seq)
    est = [cur[-1]]
    while cur.size >= 3:
        cur = _aitken(cur)
        est.append(cur[-1])
    value = float(est[-1])
    # distance to a less accelerated estimate, conservative
    unc = abs(est[-1] - est[len(est) // 2]) if len(est) > 1 else abs(seq[-1] - seq[-2])
    return value, float(unc)
