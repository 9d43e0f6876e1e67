"""Flux-form semi-Lagrangian advection and its splitting with FFSL diffusion.

The advective flux through interface ``x_k`` is the mass of the advective
reconstruction between the departure point ``x_k - f(x_k, t_n) dt`` and
``x_k``.  Courant numbers above one are handled by the exact integral, which
sums whole cells and one fractional piece.
"""
from __future__ import annotations

import numpy as np

from .diffusion1d import _robust_sl_displacement, ffsl_diffusion_step
from .errors import DomainError
from .grid import Grid1D
from .models import as_diffusivity, as_velocity
from .reconstruct import integrate_cells, interpolate_units, reconstruction_coefficients

ADVECTION_ORDERS = (1, 2)


def advective_coefficients(values, order: int) -> np.ndarray:
    """Local-coordinate coefficients of the advective reconstruction.

    ``order=1``: per-cell linear function with the unlimited centered slope
    ``(v[m+1] - v[m-1]) / 2`` per cell.  ``order=2``: the three-cell parabola.
    Both keep the cell averages.
    """
    v = np.asarray(values, dtype=float)
    if order == 1:
        return np.stack([v, 0.5 * (np.roll(v, -1) - np.roll(v, 1))])
    if order == 2:
        return reconstruction_coefficients(v, 2)
    raise ValueError(f"advection order must be one of {ADVECTION_ORDERS}, got {order}")


def advective_fluxes(values, grid: Grid1D, vel, dt: float, t: float = 0.0, order: int = 1):
    """Signed mass (in cell units) crossing each left interface during the step."""
    vel = as_velocity(vel)
    v = np.asarray(values, dtype=float)
    shift = vel.at(grid.interfaces, t) * dt / grid.dx
    if np.any(np.abs(shift) >= grid.N):
        raise DomainError(
            f"departure interval of {np.max(np.abs(shift)):.6g} cells exceeds the domain"
        )
    j = np.arange(grid.N, dtype=float)
    return integrate_cells(advective_coefficients(v, order), v, j - shift, j)


def ffsl_advection_step(values, grid: Grid1D, vel, dt: float, t: float = 0.0, order: int = 1):
    """One conservative step of ``u_t + (f u)_x = 0`` for cell averages."""
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} values, got shape {v.shape}")
    g = advective_fluxes(v, grid, vel, dt, t, order)
    return v - (np.roll(g, -1) - g)


def advdiff_step(values, grid: Grid1D, vel, model, dt: float, t: float = 0.0,
                 q: int = 2, adv_order: int = 1):
    """Advection then FFSL diffusion, both over the full step (first order splitting)."""
    tilde = ffsl_advection_step(values, grid, vel, dt, t, adv_order)
    return ffsl_diffusion_step(tilde, grid, model, dt, t, q)


def sl_advdiff_step(values, grid: Grid1D, vel, model, dt: float, t: float = 0.0, p: int = 3):
    """Nonconservative SL step for advection-diffusion.

    The diffusive displacements are taken around the foot of the backward
    Euler characteristic ``x_i - f(x_i, t) dt``.
    """
    vel = as_velocity(vel)
    model = as_diffusivity(model)
    v = np.asarray(values, dtype=float)
    x = grid.centers
    foot = x - vel.at(x, t) * dt
    tol = 1e-12 * grid.dx
    dp = _robust_sl_displacement(model, foot, t, dt, +1, tol)
    dm = _robust_sl_displacement(model, foot, t, dt, -1, tol)
    u = grid.to_units(foot)
    return 0.5 * (interpolate_units(v, u + dp / grid.dx, p)
                  + interpolate_units(v, u - dm / grid.dx, p))
