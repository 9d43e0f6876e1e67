"""Experiment presets, runs against oracles, table assembly and file output."""
from __future__ import annotations

import csv
import io
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .advection1d import advdiff_step, sl_advdiff_step
from .diffusion1d import ffsl_diffusion_step, sl_diffusion_step
from .errors import FFSLError
from .grid import make_grid_1d, make_grid_2d
from .metrics import ErrorReport, mass_drift, relative_error, total_mass
from .models import PowerLawDiffusivity, SpaceTimeDiffusivity
from .multidim import DiagonalDiffusivity2D, ffsl_diffusion_step_2d
from .oracles import (
    BarenblattParams,
    barenblatt,
    barenblatt_cell_averages,
    fd_reference_solve,
    fourier_heat_solution,
    gauss_cell_averages,
    gaussian,
)

EXPERIMENTS = ("const_diffusion", "const_advdiff", "variable_diffusion",
               "porous_media", "isotropic_2d")
SCHEME_ORDERS = {"SL": (1, 3), "FFSL": (0, 2)}

PRESETS = {
    "const_diffusion": dict(L=10.0, x0=0.0, nu=0.05, a=0.0, T=2.0, center=5.0,
                            sigma=0.5, N=200, M=100),
    "const_advdiff": dict(L=10.0, x0=0.0, nu=0.05, a=1.5, T=2.0, center=5.0,
                          sigma=0.5, adv_order=1, N=200, M=100),
    "variable_diffusion": dict(L=10.0, x0=0.0, nu_base=0.05, nu_bump=0.2, T=4.0,
                               center=2.0, sigma=0.5, refine=4, N=100, M=100),
    "porous_media": dict(m=3.0, A=1.0, t0=1.0, T=16.0, L=20.0, x0=-10.0,
                         snapshots=(1.0, 4.0, 16.0), N=50, M=320),
    "isotropic_2d": dict(L=6.0, x0=-3.0, T=2.0, half_width=1.5, nu_x0=1.5,
                         nu_y0=-1.5, nu_rate=5.0, N=50, M=40),
}

# (experiment, norm, rows) for every table; columns are SL1, SL3, FFSL0, FFSL2
TABLES = {
    1: ("const_diffusion", "l2", [(200, 50), (200, 100), (200, 200), (400, 100), (400, 200), (400, 400)]),
    2: ("const_diffusion", "linf", [(200, 50), (200, 100), (200, 200), (400, 100), (400, 200), (400, 400)]),
    3: ("const_advdiff", "l2", [(200, 50), (200, 100), (200, 200), (400, 100), (400, 200), (400, 400)]),
    4: ("const_advdiff", "linf", [(200, 50), (200, 100), (200, 200), (400, 100), (400, 200), (400, 400)]),
    5: ("variable_diffusion", "l2", [(50, 50), (100, 25), (100, 100), (200, 50)]),
    6: ("variable_diffusion", "linf", [(50, 50), (100, 25), (100, 100), (200, 50)]),
    7: ("porous_media", "l2", [(50, 320), (100, 640), (200, 1280), (400, 2560), (800, 5120)]),
}
TABLE_COLUMNS = (("SL", 1), ("SL", 3), ("FFSL", 0), ("FFSL", 2))


class ConfigError(FFSLError, ValueError):
    """Incomplete or inconsistent experiment configuration."""


class RunError(FFSLError, RuntimeError):
    """A numerical error raised during a run, tagged with the step index."""


@dataclass
class ExperimentConfig:
    experiment: str
    scheme: str = "FFSL"
    order: int = 2
    N: int | None = None
    M: int | None = None
    params: dict = field(default_factory=dict)
    out: Path | None = None

    def resolved(self) -> dict:
        if self.experiment not in PRESETS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.scheme not in SCHEME_ORDERS:
            raise ConfigError(f"unknown scheme {self.scheme!r}; use SL or FFSL")
        if self.order not in SCHEME_ORDERS[self.scheme]:
            raise ConfigError(
                f"{self.scheme} supports orders {SCHEME_ORDERS[self.scheme]}, got {self.order}"
            )
        if self.experiment == "isotropic_2d" and self.scheme != "FFSL":
            raise ConfigError("the 2D experiment is implemented for FFSL only")
        unknown = set(self.params) - set(PRESETS[self.experiment])
        if unknown:
            raise ConfigError(f"unknown parameters for {self.experiment}: {sorted(unknown)}")
        p = dict(PRESETS[self.experiment], **self.params)
        if self.N is not None:
            p["N"] = self.N
        if self.M is not None:
            p["M"] = self.M
        for key in ("N", "M"):
            if int(p[key]) != p[key] or p[key] < 1:
                raise ConfigError(f"{key} must be a positive integer, got {p[key]!r}")
            p[key] = int(p[key])
        return p


@dataclass
class Snapshot:
    t: float
    x: np.ndarray
    numerical: np.ndarray
    reference: np.ndarray | None
    y: np.ndarray | None = None


@dataclass
class RunResult:
    config: ExperimentConfig
    report: ErrorReport
    snapshots: list


def _variable_nu(p):
    L, T = p["L"], p["T"]
    lo, hi = p["x0"] + 0.5 * L, p["x0"] + 0.8 * L

    def nu(x, t):
        xi = ((x >= lo) & (x < hi)).astype(float)
        return p["nu_base"] + p["nu_bump"] * xi * np.sin(2.0 * np.pi * t / T) ** 2
    return nu


_FD_CACHE: dict = {}


def _fd_reference(p, grid, sample):
    key = (tuple(sorted((k, v) for k, v in p.items() if k not in ("M",))), sample)
    if key not in _FD_CACHE:
        u0 = gaussian(p["center"], p["sigma"], p["L"])
        _FD_CACHE[key] = fd_reference_solve(grid, u0, _variable_nu(p), p["T"],
                                            refine=p["refine"], sample=sample)
    return _FD_CACHE[key]


def _setup_1d(exp, scheme, order, p):
    """Grid, initial vector, step function and reference callback."""
    g = make_grid_1d(p["L"], p["N"], p["x0"])
    points = scheme == "SL"

    if exp in ("const_diffusion", "const_advdiff", "variable_diffusion"):
        u0 = gaussian(p["center"], p["sigma"], p["L"])
        v0 = u0(g.centers) if points else gauss_cell_averages(u0, g)
    if exp in ("const_diffusion", "const_advdiff"):
        nu, a = p["nu"], p["a"]
        if exp == "const_diffusion":
            step = (lambda v, t, dt: sl_diffusion_step(v, g, nu, dt, t, order)) if points else \
                   (lambda v, t, dt: ffsl_diffusion_step(v, g, nu, dt, t, order))
        else:
            step = (lambda v, t, dt: sl_advdiff_step(v, g, a, nu, dt, t, order)) if points else \
                   (lambda v, t, dt: advdiff_step(v, g, a, nu, dt, t, order, p["adv_order"]))

        def reference(t):
            return fourier_heat_solution(g, v0, nu, a, t)
        return g, v0, step, reference
    if exp == "variable_diffusion":
        model = SpaceTimeDiffusivity(_variable_nu(p))
        if points:
            step = lambda v, t, dt: sl_diffusion_step(v, g, model, dt, t, order)  # noqa: E731
        else:
            step = lambda v, t, dt: ffsl_diffusion_step(v, g, model, dt, t, order)  # noqa: E731

        def reference(t):
            if not math.isclose(t, p["T"]):
                return None
            return _fd_reference(p, g, "point" if points else "average")
        return g, v0, step, reference
    if exp == "porous_media":
        bp = BarenblattParams(p["m"], p["A"], p["t0"])
        model = PowerLawDiffusivity(p["m"])

        def sample(t):
            return barenblatt(g.centers, t, bp) if points else barenblatt_cell_averages(g, t, bp)
        if points:
            step = lambda v, t, dt: sl_diffusion_step(v, g, model, dt, t, order)  # noqa: E731
        else:
            step = lambda v, t, dt: ffsl_diffusion_step(v, g, model, dt, t, order)  # noqa: E731
        return g, sample(0.0), step, sample
    raise ConfigError(f"no 1D setup for {exp}")


def _isotropic_2d_setup(p, order):
    n = p["N"]
    grid = make_grid_2d(p["L"], p["L"], n, n, p["x0"], p["x0"])
    w = p["half_width"]

    def overlap(g):
        e = g.edges
        return np.clip(np.minimum(e[1:], w) - np.maximum(e[:-1], -w), 0.0, None) / g.dx
    v0 = np.outer(overlap(grid.xgrid), overlap(grid.ygrid))
    cx, cy, rate = p["nu_x0"], p["nu_y0"], p["nu_rate"]

    def nu(x, y, t):
        return np.exp(-rate * ((x - cx) ** 2 + (y - cy) ** 2))
    diff = DiagonalDiffusivity2D.isotropic(nu)

    def step(v, t, dt):
        return ffsl_diffusion_step_2d(v, grid, diff, dt, t, order)
    return grid, v0, step


def run_experiment(config: ExperimentConfig, snapshot_times=None) -> RunResult:
    """Run ``M`` steps of the configured scheme and compare with the oracle at ``T``.

    Raises
    ------
    ConfigError
        For unknown experiments, schemes, orders or parameters.
    RunError
        If a step fails; the message names the step index.
    """
    p = config.resolved()
    exp, scheme, order = config.experiment, config.scheme, config.order
    N, M, T = p["N"], p["M"], p["T"]
    dt = T / M
    if snapshot_times is None:
        snapshot_times = p.get("snapshots", (T,))
    wanted = {int(round(ts / dt)): ts for ts in snapshot_times
              if math.isclose(round(ts / dt) * dt, ts, rel_tol=1e-9, abs_tol=1e-12)}

    two_d = exp == "isotropic_2d"
    if two_d:
        grid, v0, step = _isotropic_2d_setup(p, order)
        reference = None
        measure = grid.dx**2
    else:
        grid, v0, step, reference = _setup_1d(exp, scheme, order, p)
        measure = grid.dx

    snaps = []

    def record(n, v):
        t = wanted[n]
        ref = reference(t) if reference is not None else None
        if two_d:
            snaps.append(Snapshot(t, grid.xgrid.centers, v.copy(), None, grid.ygrid.centers))
        else:
            snaps.append(Snapshot(t, grid.centers, v.copy(), ref))

    start = time.perf_counter()
    v = v0.copy()
    if 0 in wanted:
        record(0, v)
    for n in range(M):
        try:
            v = step(v, n * dt, dt)
        except FFSLError as exc:
            raise RunError(f"{exp} {scheme}{order} N={N} M={M}: step {n}: {exc}") from exc
        if n + 1 in wanted:
            record(n + 1, v)
    runtime = time.perf_counter() - start

    if reference is not None:
        ref = reference(T)
        l2 = relative_error(v, ref, "l2", measure)
        linf = relative_error(v, ref, "linf")
    else:
        l2 = linf = math.nan
    dx = grid.dx
    nu0 = p.get("nu", p.get("nu_base"))
    mu = nu0 * dt / dx**2 if nu0 is not None else math.nan
    C = p["a"] * dt / dx if "a" in p and p["a"] else math.nan
    m0, m1 = total_mass(v0, measure), total_mass(v, measure)
    report = ErrorReport(exp, scheme, order, N, M, mu, C, l2, linf, m0, m1,
                         mass_drift(m0, m1), runtime)
    result = RunResult(config, report, snaps)
    if config.out is not None:
        write_run(result, Path(config.out))
    return result


# ---------------------------------------------------------------- output

def _fmt(x):
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.10e}"
    return str(x)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def reports_to_csv(reports, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=ErrorReport.CSV_COLUMNS, lineterminator="\r\n")
    w.writeheader()
    for r in reports:
        w.writerow({k: _fmt(v) for k, v in r.as_row(timing).items()})
    return buf.getvalue()


def run_stem(report: ErrorReport) -> str:
    return f"{report.experiment}_{report.scheme}{report.order}_N{report.N}_M{report.M}"


def write_run(result: RunResult, out: Path, timing: bool = True):
    stem = run_stem(result.report)
    _atomic_write(out / f"{stem}.csv", reports_to_csv([result.report], timing))
    emit_plot_data(result, out)


def emit_plot_data(result: RunResult, out: Path) -> list:
    """Write whitespace-separated plot columns for every snapshot; returns the paths.

    1D files hold ``x numerical reference`` rows (``nan`` where no reference
    exists).  2D files hold ``x y value`` rows with a blank line after each
    x-block, the layout gnuplot and matplotlib contour helpers read directly.
    """
    stem = run_stem(result.report)
    paths = []
    for s in result.snapshots:
        lines = []
        if s.y is not None:
            lines.append("# x y value")
            for i, xv in enumerate(s.x):
                for j, yv in enumerate(s.y):
                    lines.append(f"{xv:.10e} {yv:.10e} {s.numerical[i, j]:.10e}")
                lines.append("")
        else:
            lines.append("# x numerical reference")
            ref = s.reference if s.reference is not None else np.full_like(s.numerical, np.nan)
            for xv, nv, rv in zip(s.x, s.numerical, ref):
                lines.append(f"{xv:.10e} {nv:.10e} {_fmt(float(rv))}")
        path = Path(out) / f"{stem}_t{s.t:g}.dat"
        _atomic_write(path, "\n".join(lines) + "\n")
        paths.append(path)
    return paths


def run_table(table_id: int, out: Path | None = None, timing: bool = True):
    """Run every cell of a table; write ``table<id>.csv`` and ``table<id>.txt`` to ``out``.

    Returns the list of reports in table order (rows, then columns
    SL1, SL3, FFSL0, FFSL2).
    """
    if table_id not in TABLES:
        raise ConfigError(f"unknown table {table_id}; choose from {sorted(TABLES)}")
    exp, norm, rows = TABLES[table_id]
    reports = []
    for N, M in rows:
        for scheme, order in TABLE_COLUMNS:
            cfg = ExperimentConfig(exp, scheme, order, N, M)
            reports.append(run_experiment(cfg).report)
    if out is not None:
        out = Path(out)
        _atomic_write(out / f"table{table_id}.csv", reports_to_csv(reports, timing))
        _atomic_write(out / f"table{table_id}.txt", format_table(table_id, reports))
    return reports


def format_table(table_id: int, reports) -> str:
    exp, norm, rows = TABLES[table_id]
    key = "l2_rel" if norm == "l2" else "linf_rel"
    by_cell = {(r.N, r.M, r.scheme, r.order): r for r in reports}
    show_c = exp == "const_advdiff"
    show_mu = exp != "porous_media"
    head = ["N", "M"] + (["C"] if show_c else []) + (["mu"] if show_mu else [])
    head += ["SL I1", "SL I3", "FFSL R0", "FFSL R2", "FFSL drift"]
    body = []
    for N, M in rows:
        first = by_cell[(N, M, "FFSL", 0)]
        line = [str(N), str(M)]
        if show_c:
            line.append(f"{first.C:.2g}")
        if show_mu:
            line.append(f"{first.mu:.2g}")
        line += [f"{getattr(by_cell[(N, M, s, o)], key):.3e}" for s, o in TABLE_COLUMNS]
        line.append(f"{max(by_cell[(N, M, 'FFSL', o)].mass_drift_rel for o in (0, 2)):.1e}")
        body.append(line)
    widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
    title = f"Table {table_id}: {exp}, {norm} relative error"
    fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths))  # noqa: E731
    return "\n".join([title, fmt(head), "-" * len(fmt(head))] + [fmt(r) for r in body]) + "\n"
