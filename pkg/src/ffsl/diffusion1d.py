"""One time step of the semi-Lagrangian (SL) and flux-form SL (FFSL) diffusion schemes.

Both schemes solve ``u_t = (nu u_x)_x`` on a periodic grid with the
diffusivity frozen at the old time level.

SL (nonconservative, point values at cell centers)::

    v_i <- 1/2 I_p[v](x_i + d_i^+) + 1/2 I_p[v](x_i - d_i^-)

FFSL (conservative, cell averages)::

    v_i <- v_i + (F_{i+1/2} - F_{i-1/2}) / dx
    F_k  = 1/2 (int_{x_k}^{x_k + d_k} R_q[v] - int_{x_k - d_k}^{x_k} R_q[v])

with ``d_k = sqrt(2 dt nu(x_k))`` in the linear case.  For the porous-medium
diffusivity ``nu(u) = m u**(m-1)`` the displacements are the largest roots of
``d = sqrt(2 dt nu(R[v](x_k +- d)))``, averaged over the two sides.
"""
from __future__ import annotations

import numpy as np

from ._kernels import largest_root_kernel
from .errors import ConvergenceError, ModelError, SearchWindowError
from .grid import Grid1D
from .models import PowerLawDiffusivity, as_diffusivity
from .reconstruct import (
    PiecewiseReconstruction,
    build_reconstruction,
    interpolate_units,
)

FIXED_POINT_RTOL = 1e-12  # relative to dx
FIXED_POINT_MAXITER = 50
ROOT_SCAN_SAMPLES = 256
ROOT_TOL = 1e-12  # relative to dx


def interface_displacement(model, x, t: float, dt: float):
    """Flux-tube half length ``sqrt(2 dt nu(x, t))`` at interface(s) ``x``."""
    nu = as_diffusivity(model).at(x, t)
    d = np.sqrt(2.0 * dt * nu)
    return d[()] if d.ndim == 0 else d


def ffsl_diffusion_flux(recon: PiecewiseReconstruction, x_k, delta):
    """Mass moved across interface(s) ``x_k`` in one step (length times state).

    Positive values move mass from right to left, i.e. into the cell whose
    right edge is ``x_k``.
    """
    g = recon.grid
    u = g.to_units(x_k)
    return g.dx * _flux_units(recon, u, np.asarray(delta, dtype=float) / g.dx)


def _flux_units(recon, u, d):
    return 0.5 * (recon.integrate_units(u, u + d) - recon.integrate_units(u - d, u))


def _apply_fluxes(values, flux_units):
    # flux_units[j] lives on the left interface of cell j
    return values + (np.roll(flux_units, -1) - flux_units)


def ffsl_diffusion_step(values, grid: Grid1D, model, dt: float, t: float = 0.0, q: int = 2):
    """Advance cell averages by one conservative FFSL step.

    Parameters
    ----------
    values : array_like, shape (N,)
        Cell averages at time ``t``.
    model : number, callable ``nu(x, t)``, or a diffusivity model
        A :class:`PowerLawDiffusivity` selects the nonlinear variant.
    q : {0, 2}
        Reconstruction degree.
    """
    model = as_diffusivity(model)
    if dt <= 0:
        raise ValueError(f"time step must be positive, got dt={dt}")
    recon = build_reconstruction(values, grid, q)
    if isinstance(model, PowerLawDiffusivity):
        delta = nonlinear_interface_displacement(recon, grid.interfaces, dt, model.m)
    else:
        delta = interface_displacement(model, grid.interfaces, t, dt)
    j = np.arange(grid.N, dtype=float)
    flux = _flux_units(recon, j, delta / grid.dx)
    return _apply_fluxes(recon.values, flux)


def ffsl_nonlinear_step(values, grid: Grid1D, m: float, dt: float, q: int = 2):
    return ffsl_diffusion_step(values, grid, PowerLawDiffusivity(m), dt, 0.0, q)


def sl_displacement(model, x, t: float, dt: float, sign: int, *, tol: float,
                    max_iter: int = FIXED_POINT_MAXITER, full_output: bool = False):
    """Solve ``d = sqrt(2 dt nu(x + sign*d, t))`` by fixed-point iteration.

    The iteration starts from ``sqrt(2 dt nu(x, t))`` and stops once every
    increment is below ``tol``.

    Raises
    ------
    ConvergenceError
        If some entry has not converged after ``max_iter`` iterations; the
        largest last increment is attached as ``residual``.
    """
    model = as_diffusivity(model)
    if not model.linear:
        raise ModelError("sl_displacement needs a space-time diffusivity")
    x = np.asarray(x, dtype=float)
    d = np.sqrt(2.0 * dt * model.at(x, t))
    for it in range(1, max_iter + 1):
        d_new = np.sqrt(2.0 * dt * model.at(x + sign * d, t))
        step = np.abs(d_new - d)
        d = d_new
        if np.all(step <= tol):
            d = d[()] if d.ndim == 0 else d
            return (d, it) if full_output else d
    raise ConvergenceError(
        f"displacement fixed point not reached in {max_iter} iterations "
        f"(last increment {step.max():.3e})",
        residual=float(step.max()),
    )


def _bisect_displacement(model, x, t, dt, sign, d_guess, tol):
    # Root (or jump point) of d - sqrt(2 dt nu(x + sign d)); used where the
    # fixed-point map oscillates across a discontinuity of nu.
    def h(d):
        return d - np.sqrt(2.0 * dt * model.at(x + sign * d, t))

    lo = np.zeros_like(x)
    hi = np.maximum(2.0 * d_guess, tol)
    for _ in range(60):
        bad = h(hi) <= 0
        if not bad.any():
            break
        hi = np.where(bad, 2.0 * hi, hi)
    else:
        raise ConvergenceError("could not bracket the displacement equation")
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        pos = h(mid) > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return 0.5 * (lo + hi)


def _robust_sl_displacement(model, x, t, dt, sign, tol):
    try:
        return sl_displacement(model, x, t, dt, sign, tol=tol)
    except ConvergenceError:
        pass
    # redo pointwise: keep converged entries, bisect the rest
    d = np.sqrt(2.0 * dt * model.at(x, t))
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(FIXED_POINT_MAXITER):
        d_new = np.sqrt(2.0 * dt * model.at(x + sign * d, t))
        done = np.abs(d_new - d) <= tol
        d = d_new
    todo = ~done
    d_fix = _bisect_displacement(model, x[todo], t, dt, sign, d[todo], tol)
    d = d.copy()
    d[todo] = d_fix
    return d


def largest_root_displacement(table, u, sign: int, dt: float, m: float, dx: float,
                              state_bound: float, p: int = 0,
                              samples: int = ROOT_SCAN_SAMPLES):
    """Largest nonnegative root of ``d = sqrt(2 dt nu(w(u + sign*d/dx)))``.

    ``w`` is the reconstruction with local coefficients ``table`` when
    ``p == 0``, or the degree-``p`` Lagrange interpolant of ``table[0]``.
    Positions ``u`` are in cell units and ``nu(w) = m * max(w, 0)**(m - 1)``.
    The function ``g(d) - d`` is sampled on ``[0, D]`` with
    ``D = max(3 sqrt(2 dt nu(state_bound)), 2 dx)``; the last sample where it
    is nonnegative opens the bracket, refined by bisection to ``1e-12 * dx``.

    Raises
    ------
    SearchWindowError
        If ``g(D) - D`` is still nonnegative somewhere.
    """
    u = np.ascontiguousarray(u, dtype=float)
    table = np.ascontiguousarray(np.atleast_2d(table), dtype=float)
    nu_max = m * max(state_bound, 0.0) ** (m - 1.0)
    window = max(3.0 * np.sqrt(2.0 * dt * nu_max), 2.0 * dx)
    spacing = window / (samples - 1)
    n_bisect = int(np.ceil(np.log2(max(spacing / (ROOT_TOL * dx), 1.0))))
    d = largest_root_kernel(table, int(p), u, float(sign), float(dt), float(m),
                            float(dx), window, int(samples), n_bisect)
    if np.any(d < 0):
        raise SearchWindowError(
            f"no sign change of the displacement equation within a window of {window:.6g}",
            window=window,
        )
    return d


def _recon_bound(recon: PiecewiseReconstruction) -> float:
    c = np.abs(recon.coeffs)
    weights = 0.5 ** np.arange(c.shape[0])
    return float(np.max(weights @ c))


def nonlinear_interface_displacement(recon: PiecewiseReconstruction, x_k, dt: float, m: float):
    """Mean of the largest forward and backward displacements at interface(s) ``x_k``."""
    g = recon.grid
    u = np.atleast_1d(g.to_units(x_k))
    bound = _recon_bound(recon)
    dp = largest_root_displacement(recon.coeffs, u, +1, dt, m, g.dx, bound)
    dm = largest_root_displacement(recon.coeffs, u, -1, dt, m, g.dx, bound)
    d = 0.5 * (dp + dm)
    return d[0] if np.ndim(x_k) == 0 else d


def sl_diffusion_step(values, grid: Grid1D, model, dt: float, t: float = 0.0, p: int = 3):
    """Advance point values by one nonconservative SL step with ``I_p``.

    Mass is not conserved in general.
    """
    model = as_diffusivity(model)
    if dt <= 0:
        raise ValueError(f"time step must be positive, got dt={dt}")
    v = np.asarray(values, dtype=float)
    if v.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} values, got shape {v.shape}")
    u = np.arange(grid.N) + 0.5
    dx = grid.dx
    if isinstance(model, PowerLawDiffusivity):
        # Lebesgue constant of the cubic stencil is 1.25
        bound = (1.25 if p == 3 else 1.0) * float(np.max(np.abs(v)))
        dp = largest_root_displacement(v, u, +1, dt, model.m, dx, bound, p=p)
        dm = largest_root_displacement(v, u, -1, dt, model.m, dx, bound, p=p)
    else:
        x = grid.centers
        tol = FIXED_POINT_RTOL * dx
        dp = _robust_sl_displacement(model, x, t, dt, +1, tol)
        dm = _robust_sl_displacement(model, x, t, dt, -1, tol)
    return 0.5 * (interpolate_units(v, u + dp / dx, p) + interpolate_units(v, u - dm / dx, p))
