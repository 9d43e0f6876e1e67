"""Quick invariant checks runnable without the test suite."""
from __future__ import annotations

import numpy as np

from .advection1d import advdiff_step
from .diffusion1d import ffsl_diffusion_step
from .grid import make_grid_1d, make_grid_2d
from .metrics import mass_drift, total_mass
from .models import PowerLawDiffusivity
from .multidim import DiagonalDiffusivity2D, ffsl_diffusion_step_2d
from .reconstruct import build_reconstruction, interpolate_units


def _check_mass(rng):
    g = make_grid_1d(10, 64)
    v = rng.random(64)
    worst = 0.0
    for model in (0.05, lambda x, t: 0.05 + 0.02 * np.sin(x), PowerLawDiffusivity(3)):
        for q in (0, 2):
            w = ffsl_diffusion_step(v, g, model, 0.1, 0.0, q)
            worst = max(worst, mass_drift(total_mass(v, g.dx), total_mass(w, g.dx)))
    w = advdiff_step(v, g, 1.5, 0.05, 0.1)
    worst = max(worst, mass_drift(total_mass(v, g.dx), total_mass(w, g.dx)))
    g2 = make_grid_2d(6, 6, 20, 20, -3, -3)
    v2 = rng.random((20, 20))
    diff = DiagonalDiffusivity2D.isotropic(lambda x, y, t: np.exp(-x * x - y * y))
    w2 = ffsl_diffusion_step_2d(v2, g2, diff, 0.05)
    worst = max(worst, mass_drift(total_mass(v2, 1.0), total_mass(w2, 1.0)))
    return worst <= 1e-12, f"max relative mass drift {worst:.2e}"


def _check_convex(rng):
    g = make_grid_1d(10, 64)
    v = rng.standard_normal(64)
    dt = 0.3
    d = np.sqrt(2 * dt * 0.05) / g.dx
    u = np.arange(64) + 0.5
    direct = 0.5 * (interpolate_units(v, u - d, 3) + interpolate_units(v, u + d, 3))
    err = np.max(np.abs(ffsl_diffusion_step(v, g, 0.05, dt, 0.0, 2) - direct))
    return err <= 1e-12, f"max deviation {err:.2e}"


def _check_sliding(rng):
    g = make_grid_1d(10, 64)
    v = rng.standard_normal(64)
    r = build_reconstruction(v, g, 2)
    x = rng.uniform(0, 10, 100)
    err = np.max(np.abs(r.sliding_average(x) - interpolate_units(v, g.to_units(x), 3)))
    return err <= 1e-12 * np.max(np.abs(v)), f"max deviation {err:.2e}"


def _check_stability(rng):
    g = make_grid_1d(10, 128)
    v = rng.standard_normal(128)
    dt = 1.6 * g.dx**2 / 0.05
    worst = 0.0
    for _ in range(200):
        w = ffsl_diffusion_step(v, g, 0.05, dt, 0.0, 2)
        worst = max(worst, np.linalg.norm(w) / np.linalg.norm(v) - 1.0)
        v = w
    return worst <= 1e-12, f"max norm growth {worst:.2e}"


CHECKS = (
    ("mass conservation", _check_mass),
    ("convex-combination form", _check_convex),
    ("sliding-average identity", _check_sliding),
    ("2-norm stability", _check_stability),
)


def run_selftest(echo=print) -> bool:
    rng = np.random.default_rng(12345)
    ok = True
    for name, check in CHECKS:
        passed, detail = check(rng)
        ok &= passed
        echo(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return ok
