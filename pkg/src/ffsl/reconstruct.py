"""Interpolation of point values and conservative reconstruction of cell averages.

Two operators act on the same value vector ``v``:

* ``lagrange_interpolate`` treats ``v`` as point values at the cell centers and
  evaluates the symmetric Lagrange interpolant of odd degree ``p``.
* ``build_reconstruction`` treats ``v`` as cell averages and builds per-cell
  polynomials of even degree ``q`` that reproduce the averages of the
  ``q + 1`` cells around each cell.

Reconstruction coefficients are stored in the local coordinate
``xi = (x - x_m) / dx`` of each cell, ``xi`` in ``[-1/2, 1/2]``.  The moving
average of ``R_q`` over one cell width equals ``I_{q+1}`` pointwise, which is
what makes the flux-form diffusion step a convex combination of shifted
interpolations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StencilError
from .grid import Grid1D

SUPPORTED_Q = (0, 2)
SUPPORTED_P = (1, 3)


def _check_values(grid: Grid1D, values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} values, got shape {v.shape}")
    return v


def lagrange_interpolate(values, grid: Grid1D, x, p: int = 3):
    """Evaluate the degree-``p`` symmetric Lagrange interpolant at ``x``.

    The nodes are the cell centers.  For ``x`` between nodes ``k`` and
    ``k + 1`` the interpolant passes through ``v[k-(p-1)/2], ..., v[k+(p+1)/2]``
    (indices taken mod ``N``).

    Parameters
    ----------
    values : array_like, shape (N,)
        Point values at the cell centers.
    grid : Grid1D
    x : float or array_like
        Evaluation points; any real value, wrapped periodically.
    p : {1, 3}
    """
    v = _check_values(grid, values)
    return interpolate_units(v, grid.to_units(x), p)


def interpolate_units(v: np.ndarray, u, p: int):
    """Same as :func:`lagrange_interpolate` with ``u`` given in cell units."""
    if p not in SUPPORTED_P:
        raise StencilError(f"interpolation degree must be one of {SUPPORTED_P}, got {p}")
    n = v.shape[0]
    if n < p + 1:
        raise StencilError(f"degree {p} interpolation needs at least {p + 1} nodes, got {n}")
    s = np.asarray(u, dtype=float) - 0.5
    k = np.floor(s)
    t = s - k
    k = k.astype(np.int64)
    if p == 1:
        out = (1.0 - t) * v[k % n] + t * v[(k + 1) % n]
    else:
        tm1, tm2, tp1 = t - 1.0, t - 2.0, t + 1.0
        out = (
            -t * tm1 * tm2 / 6.0 * v[(k - 1) % n]
            + tp1 * tm1 * tm2 / 2.0 * v[k % n]
            - tp1 * t * tm2 / 2.0 * v[(k + 1) % n]
            + tp1 * t * tm1 / 6.0 * v[(k + 2) % n]
        )
    return out[()] if np.ndim(out) == 0 else out


def reconstruction_coefficients(values: np.ndarray, q: int) -> np.ndarray:
    """Local-coordinate polynomial coefficients, shape ``(q + 1, N)``.

    Row ``j`` multiplies ``xi**j``.
    """
    if q not in SUPPORTED_Q:
        raise StencilError(f"reconstruction degree must be one of {SUPPORTED_Q}, got {q}")
    v = np.asarray(values, dtype=float)
    if v.shape[0] <= q:
        raise StencilError(f"degree {q} reconstruction needs more than {q} cells, got {v.shape[0]}")
    if q == 0:
        return v[np.newaxis, :].copy()
    vm = np.roll(v, 1)
    vp = np.roll(v, -1)
    c2 = 0.5 * (vp - 2.0 * v + vm)
    c1 = 0.5 * (vp - vm)
    c0 = v - c2 / 12.0
    return np.stack([c0, c1, c2])


def _primitive(c: np.ndarray, xi):
    """Antiderivative in ``xi`` of the local polynomial, zero at ``xi = 0``."""
    if c.shape[0] == 1:
        return c[0] * xi
    if c.shape[0] == 2:
        return xi * (c[0] + 0.5 * c[1] * xi)
    return xi * (c[0] + xi * (0.5 * c[1] + xi * c[2] / 3.0))


def _polyval(c: np.ndarray, xi):
    out = c[-1] * np.ones_like(xi)
    for row in c[-2::-1]:
        out = out * xi + row
    return out


def integrate_cells(coeffs: np.ndarray, cell_mass: np.ndarray, ua, ub):
    """Signed integral, in cell units, of a piecewise polynomial between ``ua`` and ``ub``.

    ``coeffs`` has shape ``(deg + 1, N)`` in local coordinates and
    ``cell_mass[m]`` is the integral over cell ``m`` in units (its average).
    Whole cells crossed by the interval contribute ``cell_mass`` directly, so
    an interval covering exactly cell ``m`` returns ``cell_mass[m]`` with no
    roundoff from the polynomial.
    """
    n = cell_mass.shape[0]
    ua = np.asarray(ua, dtype=float)
    ub = np.asarray(ub, dtype=float)
    ua, ub = np.broadcast_arrays(ua, ub)
    width = ub - ua
    if np.any(~np.isfinite(width)):
        raise DomainError("integration bounds must be finite")
    if np.any(np.abs(width) >= n):
        raise DomainError(
            f"integration interval of {np.max(np.abs(width)):.6g} cells does not fit "
            f"in a periodic domain of {n} cells"
        )
    sign = np.where(width < 0, -1.0, 1.0)
    lo = np.minimum(ua, ub)
    hi = np.maximum(ua, ub)

    ia = np.floor(lo)
    ib = np.floor(hi)
    xa = lo - ia - 0.5
    xb = hi - ib - 0.5
    ia = ia.astype(np.int64)
    ib = ib.astype(np.int64)
    ca = coeffs[:, ia % n]
    cb = coeffs[:, ib % n]

    same = ia == ib
    inside = _primitive(ca, xb) - _primitive(ca, xa)
    # a start on a cell edge takes the stored average so integer shifts are exact
    left_part = np.where(xa == -0.5, cell_mass[ia % n],
                         _primitive(ca, 0.5) - _primitive(ca, xa))
    right_part = _primitive(cb, xb) - _primitive(cb, -0.5)

    # whole cells strictly between ia and ib
    nfull = np.where(same, 0, ib - ia - 1)
    whole = np.zeros(lo.shape)
    for m in range(1, int(nfull.max(initial=0)) + 1):
        whole = whole + np.where(m <= nfull, cell_mass[(ia + m) % n], 0.0)
    res = np.where(same, inside, left_part + whole + right_part)
    res = sign * res
    return res[()] if res.ndim == 0 else res


@dataclass(frozen=True)
class PiecewiseReconstruction:
    """Per-cell polynomials of degree ``q`` reconstructed from cell averages."""

    grid: Grid1D
    q: int
    values: np.ndarray
    coeffs: np.ndarray

    def __call__(self, x):
        return self.evaluate_units(self.grid.to_units(x))

    def evaluate_units(self, u):
        u = np.asarray(u, dtype=float)
        i = np.floor(u)
        xi = u - i - 0.5
        c = self.coeffs[:, i.astype(np.int64) % self.grid.N]
        out = _polyval(c, xi)
        return out[()] if out.ndim == 0 else out

    def integrate_units(self, ua, ub):
        """Integral between unit positions, in units of ``dx * value``."""
        return integrate_cells(self.coeffs, self.values, ua, ub)

    def integrate(self, a, b):
        g = self.grid
        return g.dx * self.integrate_units(g.to_units(a), g.to_units(b))

    def sliding_average(self, x):
        u = self.grid.to_units(x)
        return self.integrate_units(u - 0.5, u + 0.5)


def build_reconstruction(values, grid: Grid1D, q: int = 2) -> PiecewiseReconstruction:
    """Reconstruct piecewise polynomials of even degree ``q`` from cell averages.

    For every cell ``m`` the polynomial ``Q_m`` has the prescribed averages
    over cells ``m - q/2 .. m + q/2``.  ``q = 0`` gives the piecewise constant
    field; ``q = 2`` the unlimited parabola of the three-cell stencil.

    Raises
    ------
    StencilError
        If ``q`` is unsupported or ``N <= q``.
    """
    v = _check_values(grid, values)
    coeffs = reconstruction_coefficients(v, q)
    return PiecewiseReconstruction(grid, q, v.copy(), coeffs)


def integrate_reconstruction(recon: PiecewiseReconstruction, a, b):
    """Exact signed integral of ``recon`` over ``[a, b]`` with periodic wrap.

    Raises
    ------
    DomainError
        If ``|b - a| >= L``.
    """
    return recon.integrate(a, b)


def sliding_average(recon: PiecewiseReconstruction, x):
    """Average of ``recon`` over the window ``[x - dx/2, x + dx/2]``."""
    return recon.sliding_average(x)
