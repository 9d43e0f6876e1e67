"""Acceptance criteria for the FFSL package, one test per criterion.

Each test prints a single PASS/FAIL line; the same lines are repeated in the
pytest terminal summary under "acceptance criteria".
"""
from functools import lru_cache

import numpy as np

from ffsl.diffusion1d import ffsl_diffusion_step
from ffsl.experiments import TABLES, ExperimentConfig, run_experiment
from ffsl.grid import make_grid_1d, make_grid_2d
from ffsl.metrics import relative_error
from ffsl.multidim import DiagonalDiffusivity2D, ffsl_diffusion_step_2d
from ffsl.oracles import fd_reference_solve, fourier_heat_solution, gauss_cell_averages, gaussian
from ffsl.reconstruct import build_reconstruction, lagrange_interpolate
from ffsl.experiments import PRESETS, _variable_nu


@lru_cache(maxsize=None)
def report(exp, scheme, order, N=None, M=None, **params):
    return run_experiment(ExperimentConfig(exp, scheme, order, N, M, params=params)).report


def test_01_mass_conservation(record_criterion):
    worst, where = 0.0, None
    for tid in (1, 3, 5, 7):
        exp, _, rows = TABLES[tid]
        for N, M in rows:
            for q in (0, 2):
                r = report(exp, "FFSL", q, N, M)
                if r.mass_drift_rel >= worst:
                    worst, where = r.mass_drift_rel, f"{exp} R{q} N={N} M={M}"
    for q in (0, 2):
        r = report("isotropic_2d", "FFSL", q)
        if r.mass_drift_rel >= worst:
            worst, where = r.mass_drift_rel, f"isotropic_2d R{q}"
    ok = worst <= 1e-12
    record_criterion(1, "mass conservation", ok, f"max drift {worst:.2e} ({where})")
    assert ok


def test_02_convex_combination(record_criterion, rng):
    g = make_grid_1d(10, 64)
    v = rng.standard_normal(64)
    dt, nu = 0.37, 0.05
    d = np.sqrt(2 * dt * nu)
    x = g.centers
    direct = 0.5 * (lagrange_interpolate(v, g, x + d, 3) + lagrange_interpolate(v, g, x - d, 3))
    err = np.max(np.abs(ffsl_diffusion_step(v, g, nu, dt, q=2) - direct))
    ok = err <= 1e-12
    record_criterion(2, "convex-combination equivalence", ok, f"max deviation {err:.2e}")
    assert ok


def test_03_sliding_average(record_criterion, rng):
    g = make_grid_1d(10, 64)
    v = rng.standard_normal(64)
    r = build_reconstruction(v, g, 2)
    x = rng.uniform(0, 10, 100)
    err = np.max(np.abs(r.sliding_average(x) - lagrange_interpolate(v, g, x, 3)))
    tol = 1e-12 * np.max(np.abs(v))
    ok = err <= tol
    record_criterion(3, "sliding-average identity", ok, f"max deviation {err:.2e} (tol {tol:.2e})")
    assert ok


def test_04_l2_stability(record_criterion, rng):
    g = make_grid_1d(10, 128)
    nu = 0.05
    v0 = rng.standard_normal(128)
    worst = -np.inf
    for mu in (0.2, 0.8, 1.6):
        dt = mu * g.dx**2 / nu
        for q in (0, 2):
            v = v0.copy()
            n_prev = np.linalg.norm(v)
            for _ in range(1000):
                v = ffsl_diffusion_step(v, g, nu, dt, q=q)
                n = np.linalg.norm(v)
                worst = max(worst, (n - n_prev) / n_prev)
                n_prev = n
    ok = worst <= 1e-12
    record_criterion(4, "2-norm stability", ok, f"max relative growth per step {worst:.2e}")
    assert ok


def test_05_constant_coefficient_accuracy(record_criterion):
    rows = TABLES[1][2]
    err = {(N, M, s, o): report("const_diffusion", s, o, N, M).l2_rel
           for N, M in rows for s, o in (("SL", 1), ("FFSL", 0), ("FFSL", 2))}
    r2, r0 = err[(200, 100, "FFSL", 2)], err[(200, 100, "FFSL", 0)]
    checks = {
        "R2 within 5x of 2.02e-4": 2.02e-4 / 5 <= r2 <= 2.02e-4 * 5,
        "R0 within 2x of 1.45e-2": 1.45e-2 / 2 <= r0 <= 1.45e-2 * 2,
        # every row: second order reconstruction far better than piecewise constant
        "R2 << R0": all(err[(N, M, "FFSL", 2)] < 0.1 * err[(N, M, "FFSL", 0)] for N, M in rows),
        # R0 and I1 columns coincide to table precision
        "R0 ~ I1": all(abs(err[(N, M, "FFSL", 0)] / err[(N, M, "SL", 1)] - 1) < 0.02
                       for N, M in rows),
        # smallest mu in each N block is the worst R0 row
        "R0 worst at mu=0.2": err[(200, 200, "FFSL", 0)] > max(err[(200, 50, "FFSL", 0)],
                                                               err[(200, 100, "FFSL", 0)]),
        # mu=1.6 row is the best R0 row
        "R0 best at mu=1.6": err[(400, 100, "FFSL", 0)] == min(err[(N, M, "FFSL", 0)] for N, M in rows),
        # at equal mu the finer grid has the smaller R2 error
        "R2 decreases with N at fixed mu": err[(400, 200, "FFSL", 2)] < err[(200, 50, "FFSL", 2)]
        and err[(400, 400, "FFSL", 2)] < err[(200, 100, "FFSL", 2)],
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    record_criterion(5, "constant-coefficient accuracy", ok,
                     f"R2={r2:.3e} R0={r0:.3e}" + (f" failed: {failed}" if failed else ""))
    assert ok, failed


def test_06_truncation_order(record_criterion):
    ladder = [(100, 50), (200, 100), (400, 200)]
    errs = [report("const_diffusion", "FFSL", 2, N, M).l2_rel for N, M in ladder]
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    ok = all(r >= 1.8 for r in ratios)
    record_criterion(6, "truncation-order check", ok,
                     "errors " + ", ".join(f"{e:.3e}" for e in errs)
                     + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios))
    assert ok


def test_07_barenblatt(record_criterion):
    rows = TABLES[7][2]
    r2 = [report("porous_media", "FFSL", 2, N, M).l2_rel for N, M in rows]
    i3 = [report("porous_media", "SL", 3, N, M).l2_rel for N, M in rows]
    decreasing = all(a > b for a, b in zip(r2, r2[1:]))
    finest = r2[-1] <= 1e-2
    beats = all(a < b for a, b in zip(r2, i3))
    ok = decreasing and finest and beats
    record_criterion(7, "Barenblatt-Pattle refinement", ok,
                     "R2 " + ", ".join(f"{e:.2e}" for e in r2)
                     + "; I3 " + ", ".join(f"{e:.2e}" for e in i3))
    assert ok


def test_08_advection_diffusion(record_criterion):
    r = report("const_advdiff", "FFSL", 2, 400, 200)
    ok = r.l2_rel <= 1e-2 and r.mass_drift_rel <= 1e-12
    record_criterion(8, "advection-diffusion", ok,
                     f"l2 {r.l2_rel:.3e}, mass drift {r.mass_drift_rel:.2e}")
    assert ok


def test_09_two_dimensional(record_criterion, rng):
    drift = max(report("isotropic_2d", "FFSL", q).mass_drift_rel for q in (0, 2))

    # axis swap on a variant whose diffusivity is symmetric under x <-> y
    p = PRESETS["isotropic_2d"]
    g = make_grid_2d(p["L"], p["L"], p["N"], p["N"], p["x0"], p["x0"])
    nu = lambda x, y, t: np.exp(-5.0 * ((x - 1.5) ** 2 + (y - 1.5) ** 2))  # noqa: E731
    diff = DiagonalDiffusivity2D.isotropic(nu)
    dt = p["T"] / p["M"]
    a = rng.random(g.shape)
    b = a.T.copy()
    for n in range(p["M"]):
        a = ffsl_diffusion_step_2d(a, g, diff, dt, n * dt)
        b = ffsl_diffusion_step_2d(b, g.transpose(), diff, dt, n * dt)
    swap = np.max(np.abs(a.T - b))

    # separable initial data reduces to the 1D scheme at doubled diffusivity, halved increment
    prof = rng.standard_normal(g.Nx)
    v = np.repeat(prof[:, None], g.Ny, axis=1)
    w2 = ffsl_diffusion_step_2d(v, g, 0.05, 0.2)
    w1 = prof + 0.5 * (ffsl_diffusion_step(prof, g.xgrid, 0.1, 0.2) - prof)
    reduction = np.max(np.abs(w2 - w1[:, None]))

    ok = drift <= 1e-12 and swap <= 1e-12 and reduction <= 1e-12
    record_criterion(9, "2D properties", ok,
                     f"mass drift {drift:.2e}, axis swap {swap:.2e}, 1D reduction {reduction:.2e}")
    assert ok


def test_10_oracle_cross_validation(record_criterion):
    g = make_grid_1d(10, 200)
    u0 = gaussian(5.0, 0.5, 10.0)
    exact = fourier_heat_solution(g, gauss_cell_averages(u0, g), 0.05, 0.0, 2.0)
    fd = fd_reference_solve(g, u0, 0.05, 2.0, refine=32)
    cross = relative_error(fd, exact)

    p = dict(PRESETS["variable_diffusion"])
    gv = make_grid_1d(p["L"], p["N"], p["x0"])
    u0v = gaussian(p["center"], p["sigma"], p["L"])
    coarse = fd_reference_solve(gv, u0v, _variable_nu(p), p["T"], refine=4)
    fine = fd_reference_solve(gv, u0v, _variable_nu(p), p["T"], refine=32)
    self_conv = relative_error(coarse, fine)

    ok = cross <= 1e-6 and self_conv <= 1e-4
    record_criterion(10, "oracle cross-validation", ok,
                     f"Fourier vs FD {cross:.2e}, FD self-convergence {self_conv:.2e}")
    assert ok
