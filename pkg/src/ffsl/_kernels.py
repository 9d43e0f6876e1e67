"""Compiled inner loops for the nonlinear displacement search."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _evaluate(table, p, pos):
    n = table.shape[1]
    if p == 0:
        # local polynomial coefficients, row j multiplies xi**j
        c = math.floor(pos)
        xi = pos - c - 0.5
        i = int(c) % n
        deg = table.shape[0] - 1
        out = table[deg, i]
        for r in range(deg - 1, -1, -1):
            out = out * xi + table[r, i]
        return out
    s = pos - 0.5
    c = math.floor(s)
    t = s - c
    k = int(c)
    v = table[0]
    if p == 1:
        return (1.0 - t) * v[k % n] + t * v[(k + 1) % n]
    tm1 = t - 1.0
    tm2 = t - 2.0
    tp1 = t + 1.0
    return (-t * tm1 * tm2 / 6.0 * v[(k - 1) % n]
            + tp1 * tm1 * tm2 / 2.0 * v[k % n]
            - tp1 * t * tm2 / 2.0 * v[(k + 1) % n]
            + tp1 * t * tm1 / 6.0 * v[(k + 2) % n])


@njit(cache=True)
def _residual(table, p, u0, sign, dx, sc, e, d):
    # sqrt(2 dt m w**(m-1)) - d with sc = sqrt(2 dt m), e = (m - 1)/2
    w = _evaluate(table, p, u0 + sign * d / dx)
    if w <= 0.0:
        return -d
    if e == 1.0:
        return sc * w - d
    if e == 0.5:
        return sc * math.sqrt(w) - d
    return sc * w**e - d


@njit(cache=True)
def _local_bound(table, p, lo, hi):
    """Upper bound of |w| on positions [lo, hi] (cell units)."""
    n = table.shape[1]
    best = 0.0
    if p == 0:
        deg = table.shape[0] - 1
        for c in range(int(math.floor(lo)), int(math.floor(hi)) + 1):
            i = c % n
            b = 0.0
            scale = 1.0
            for r in range(deg + 1):
                b += abs(table[r, i]) * scale
                scale *= 0.5
            if b > best:
                best = b
        return best
    v = table[0]
    for k in range(int(math.floor(lo - 0.5)) - 1, int(math.floor(hi - 0.5)) + 3):
        a = abs(v[k % n])
        if a > best:
            best = a
    return 1.25 * best if p == 3 else best


@njit(cache=True)
def largest_root_kernel(table, p, u, sign, dt, m, dx, window, samples, n_bisect):
    """Return displacements, or -1 where the window holds no sign change."""
    out = np.empty(u.shape[0])
    sc = math.sqrt(2.0 * dt * m)
    e = 0.5 * (m - 1.0)
    step = window / (samples - 1)
    reach = sign * window / dx
    for q in range(u.shape[0]):
        # samples beyond the largest attainable g(d) cannot be roots
        b = _local_bound(table, p, min(u[q], u[q] + reach), max(u[q], u[q] + reach))
        if b == 0.0:
            out[q] = 0.0
            continue
        gmax = sc * b**e
        j = samples - 1
        if gmax < window:
            j = min(samples - 2, int(gmax / step) + 1)
        while j >= 0:
            if _residual(table, p, u[q], sign, dx, sc, e, j * step) >= 0.0:
                break
            j -= 1
        if j == samples - 1:
            out[q] = -1.0
            continue
        lo = j * step
        hi = (j + 1) * step
        for _ in range(n_bisect):
            mid = 0.5 * (lo + hi)
            if _residual(table, p, u[q], sign, dx, sc, e, mid) >= 0.0:
                lo = mid
            else:
                hi = mid
        out[q] = lo
    return out
