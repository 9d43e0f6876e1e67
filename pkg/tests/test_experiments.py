import math

import numpy as np
import pytest

from ffsl.experiments import (
    PRESETS,
    TABLES,
    ConfigError,
    ExperimentConfig,
    RunError,
    emit_plot_data,
    format_table,
    reports_to_csv,
    run_experiment,
    run_table,
)


def _run(exp, scheme, order, **kw):
    return run_experiment(ExperimentConfig(exp, scheme, order, **kw))


def test_const_ffsl2_report():
    r = _run("const_diffusion", "FFSL", 2).report
    assert (r.N, r.M) == (200, 100)
    assert r.mu == pytest.approx(0.4)
    # reference value 2.02e-4 was obtained with an unknown initial width
    assert 2.02e-4 / 5 <= r.l2_rel <= 2.02e-4 * 5
    assert r.mass_drift_rel <= 1e-12


def test_const_sl3_report():
    r = _run("const_diffusion", "SL", 3).report
    assert 2.91e-4 / 2 <= r.l2_rel <= 2.91e-4 * 2
    assert r.mass_drift_rel > 0


def test_porous_ffsl2_report():
    r = _run("porous_media", "FFSL", 2).report
    assert 2.67e-2 / 2 <= r.l2_rel <= 2.67e-2 * 2
    assert r.mass_drift_rel <= 1e-12
    assert math.isnan(r.mu)


def test_advdiff_courant_and_mu():
    r = _run("const_advdiff", "FFSL", 2).report
    assert r.C == pytest.approx(0.6)
    assert r.mu == pytest.approx(0.4)


@pytest.mark.parametrize("kw", [
    dict(experiment="nope"),
    dict(experiment="const_diffusion", scheme="XX"),
    dict(experiment="const_diffusion", scheme="SL", order=2),
    dict(experiment="const_diffusion", N=0),
    dict(experiment="const_diffusion", params={"bogus": 1}),
    dict(experiment="isotropic_2d", scheme="SL", order=3),
])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kw).resolved()


def test_run_error_names_step():
    cfg = ExperimentConfig("const_diffusion", "FFSL", 2, N=20, M=1, params={"nu": 50.0})
    with pytest.raises(RunError, match="step 0"):
        run_experiment(cfg)


def test_table_structure():
    assert len(TABLES[1][2]) == 6
    assert len(TABLES[7][2]) == 5
    assert (200, 50) in TABLES[5][2] and len(TABLES[5][2]) == 4
    reports = run_table(5)
    assert len(reports) == 16
    assert {(r.scheme, r.order) for r in reports} == {("SL", 1), ("SL", 3), ("FFSL", 0), ("FFSL", 2)}
    mu = {(r.N, r.M): r.mu for r in reports}
    assert mu[(200, 50)] == pytest.approx(1.6)
    text = format_table(5, reports)
    assert len(text.strip().splitlines()) >= 5


def test_csv_is_deterministic_without_timing():
    a = reports_to_csv([_run("const_diffusion", "FFSL", 2, N=50, M=10).report], timing=False)
    b = reports_to_csv([_run("const_diffusion", "FFSL", 2, N=50, M=10).report], timing=False)
    assert a == b
    assert a.splitlines()[1].endswith(",")


def test_plot_data_snapshots(tmp_path):
    res = _run("porous_media", "FFSL", 2, N=50, M=320)
    paths = emit_plot_data(res, tmp_path)
    assert sorted(p.name for p in paths) == sorted(
        f"porous_media_FFSL2_N50_M320_t{t}.dat" for t in (1, 4, 16))
    rows = np.loadtxt(paths[0])
    assert rows.shape == (50, 3)

    res = _run("variable_diffusion", "FFSL", 2)
    (path,) = emit_plot_data(res, tmp_path)
    assert path.name.endswith("_t4.dat")
    assert np.all(np.isfinite(np.loadtxt(path)))

    res = _run("isotropic_2d", "FFSL", 0)
    (path,) = emit_plot_data(res, tmp_path)
    assert path.name.endswith("_t2.dat")
    blocks = path.read_text().strip().split("\n\n")
    assert len(blocks) == PRESETS["isotropic_2d"]["N"]
    assert np.loadtxt(path).shape == (50 * 50, 3)
