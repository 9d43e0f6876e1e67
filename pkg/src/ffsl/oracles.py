"""Exact and reference solutions for measuring scheme errors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.special import gamma

from .errors import IntegrationError
from .grid import Grid1D
from .models import as_diffusivity


def gauss_cell_averages(func, grid: Grid1D, order: int = 8, breakpoints=()):
    """Cell averages of ``func`` by Gauss-Legendre quadrature on every cell.

    Cells containing one of ``breakpoints`` (kinks, support edges) are split
    there, and each piece is integrated with the substitution
    ``x = edge -+ s**2`` towards the breakpoint so that square-root type
    endpoint behaviour is integrated accurately.
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = grid.edges
    a, b = edges[:-1], edges[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    avg = 0.5 * (func(x) @ weights)
    for bp in breakpoints:
        for i in np.nonzero((a < bp) & (bp < b))[0]:
            avg[i] = (_split_integral(func, a[i], bp, nodes, weights)
                      + _split_integral(func, bp, b[i], nodes, weights)) / grid.dx
    return avg


def _split_integral(func, lo, hi, nodes, weights):
    # each half [e, c] is mapped by x = e + (c - e) s**2, clustering nodes at e
    c = 0.5 * (lo + hi)
    total = 0.0
    for end, other in ((lo, c), (hi, c)):
        h = other - end
        s = 0.5 * (nodes + 1.0)  # on (0, 1)
        xs = end + h * s**2
        total += abs(h) * np.sum(func(xs) * 2.0 * s * 0.5 * weights)
    return total


def gaussian(center: float, sigma: float, L: float | None = None):
    """Gaussian profile, optionally summed over periodic images of period ``L``."""
    def u0(x):
        x = np.asarray(x, dtype=float)
        if L is None:
            return np.exp(-((x - center) ** 2) / (2.0 * sigma**2))
        out = np.zeros_like(x)
        for k in (-1, 0, 1):
            out += np.exp(-((x - center - k * L) ** 2) / (2.0 * sigma**2))
        return out
    return u0


def fourier_heat_solution(grid: Grid1D, u0, nu: float, a: float, t: float):
    """Exact periodic solution of ``u_t + a u_x = nu u_xx`` at time ``t``.

    ``u0`` holds either point values or cell averages; the propagator
    ``exp(-nu w^2 t - i a w t)`` with ``w = 2 pi k / L`` acts on the discrete
    Fourier coefficients and commutes with cell averaging, so the output has
    the same interpretation as the input.
    """
    v = np.asarray(u0, dtype=float)
    if t == 0:
        return v.copy()
    k = np.fft.fftfreq(grid.N, d=1.0 / grid.N)
    w = 2.0 * np.pi * k / grid.L
    vh = np.fft.fft(v)
    prop = np.exp(-nu * w**2 * t - 1j * a * w * t)
    if grid.N % 2 == 0:
        # the Nyquist mode stands for cos(w x); keep its transport real
        nq = grid.N // 2
        prop[nq] = np.exp(-nu * w[nq] ** 2 * t) * np.cos(a * w[nq] * t)
    return np.fft.ifft(vh * prop).real


@dataclass(frozen=True)
class BarenblattParams:
    m: float = 3.0
    A: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        if not self.m > 1:
            raise ValueError(f"m must exceed 1, got {self.m}")
        if self.A == 0:
            raise ValueError("A must be nonzero")
        if not self.t0 > 0:
            raise ValueError(f"t0 must be positive, got {self.t0}")

    @property
    def k(self) -> float:
        return 1.0 / (self.m + 1.0)

    @property
    def beta(self) -> float:
        return self.k * (self.m - 1.0) / (2.0 * self.m)

    def support_radius(self, t: float) -> float:
        return abs(self.A) * (t + self.t0) ** self.k / math.sqrt(self.beta)

    def mass(self) -> float:
        """Total mass, independent of time."""
        alpha = 1.0 / (self.m - 1.0)
        return (abs(self.A) ** (2 * alpha + 1) / math.sqrt(self.beta)
                * math.sqrt(math.pi) * gamma(alpha + 1) / gamma(alpha + 1.5))


def barenblatt(x, t: float, params: BarenblattParams = BarenblattParams()):
    """Barenblatt-Pattle solution of ``u_t = (m u^(m-1) u_x)_x`` centered at 0."""
    p = params
    s = t + p.t0
    if s <= 0:
        raise ValueError("t + t0 must be positive")
    x = np.asarray(x, dtype=float)
    base = np.maximum(p.A**2 - p.beta * x**2 / s ** (2 * p.k), 0.0)
    out = s ** (-p.k) * base ** (1.0 / (p.m - 1.0))
    return out[()] if out.ndim == 0 else out


def barenblatt_cell_averages(grid: Grid1D, t: float,
                             params: BarenblattParams = BarenblattParams(), order: int = 8):
    r = params.support_radius(t)
    return gauss_cell_averages(lambda x: barenblatt(x, t, params), grid, order,
                               breakpoints=(-r, r))


def fd_reference_solve(grid: Grid1D, u0, nu, T: float, refine: int = 4,
                       sample: str = "average", rtol: float = 1e-10, atol: float = 1e-13,
                       max_step: float | None = None):
    """Reference solution on ``grid`` from a conservative FD solve on a refined grid.

    The semi-discretization on the grid with ``refine * N`` cells is::

        dU_i/dt = [nu_{i+1/2} (U_{i+1} - U_i) - nu_{i-1/2} (U_i - U_{i-1})] / h**2

    where ``nu_{i+1/2}`` is the harmonic mean of ``nu`` at the two adjacent
    centers (exact flux for piecewise constant diffusivity jumping at an
    interface).  The ODE system is integrated by an implicit BDF method with
    a sparse Jacobian.

    Parameters
    ----------
    u0 : callable
        Initial profile; its exact fine-cell averages start the solve.
    nu : number, callable ``nu(x, t)`` or linear diffusivity model
    sample : {"average", "point"}
        Return coarse cell averages (block average of fine cells) or point
        values at coarse centers (fourth-order deconvolution of the four
        fine cells around each center; needs even ``refine``).
    """
    model = as_diffusivity(nu)
    if not model.linear:
        raise ValueError("fd_reference_solve needs a linear diffusivity")
    if sample == "point" and refine % 2:
        raise ValueError("point sampling needs an even refinement factor")
    fine = Grid1D(grid.L, grid.N * refine, grid.x0)
    h = fine.dx
    U0 = gauss_cell_averages(u0, fine) if callable(u0) else np.asarray(u0, dtype=float)
    n = fine.N
    xc = fine.centers
    xc_next = xc + h  # centers to the right, unwrapped
    idx = np.arange(n)
    nxt = (idx + 1) % n

    def nu_faces(t):
        a = model.at(xc, t)
        b = model.at(xc_next, t)
        s = a + b
        return np.where(s > 0, 2.0 * a * b / np.where(s > 0, s, 1.0), 0.0)

    def rhs(t, U):
        w = nu_faces(t)
        flux = w * (U[nxt] - U)  # on the right face of each fine cell
        return (flux - np.roll(flux, 1)) / h**2

    def jac(t, U):
        w = nu_faces(t)
        wl = np.roll(w, 1)
        rows = np.concatenate([idx, idx, idx])
        cols = np.concatenate([idx, nxt, (idx - 1) % n])
        vals = np.concatenate([-(w + wl), w, wl]) / h**2
        return sparse.csc_matrix((vals, (rows, cols)), shape=(n, n))

    if max_step is None:
        max_step = T / 50.0
    sol = solve_ivp(rhs, (0.0, T), U0, method="BDF", jac=jac, rtol=rtol, atol=atol,
                    max_step=max_step, t_eval=[T])
    if not sol.success:
        raise IntegrationError(f"reference integration failed: {sol.message}")
    U = sol.y[:, -1]
    if sample == "average":
        return U.reshape(grid.N, refine).mean(axis=1)
    # coarse center = fine interface between cells r/2-1 and r/2 of each block
    j = idx.reshape(grid.N, refine)[:, refine // 2]
    return (-U[(j - 2) % n] + 7.0 * U[(j - 1) % n] + 7.0 * U[j] - U[(j + 1) % n]) / 12.0
