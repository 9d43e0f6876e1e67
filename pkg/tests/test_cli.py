import subprocess
import sys

import pytest

from ffsl.cli import main, parse_config_file


def test_run_writes_outputs(tmp_path, capsys):
    rc = main(["run", "--experiment", "const_diffusion", "--scheme", "FFSL", "--order", "2",
               "--N", "50", "--M", "10", "--out", str(tmp_path)])
    assert rc == 0
    assert "l2_rel=" in capsys.readouterr().out
    assert (tmp_path / "const_diffusion_FFSL2_N50_M10.csv").exists()
    assert (tmp_path / "const_diffusion_FFSL2_N50_M10_t2.dat").exists()


def test_run_no_timing_is_byte_identical(tmp_path):
    args = ["run", "--experiment", "variable_diffusion", "--scheme", "SL", "--order", "3",
            "--N", "50", "--M", "25", "--no-timing"]
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        assert main(args + ["--out", str(d)]) == 0
        outs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert outs[0] == outs[1]


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\nexperiment = const_diffusion\nscheme = SL\norder = 1\n"
                   "N = 40\nM = 8\nsigma = 0.7\n")
    assert parse_config_file(cfg)["sigma"] == 0.7
    assert main(["run", "--config", str(cfg), "--set", "nu=0.1", "--M", "16"]) == 0
    out = capsys.readouterr().out
    assert "SL1 N=40 M=16" in out


def test_usage_errors(tmp_path, capsys):
    assert main(["run", "--experiment", "const_diffusion", "--scheme", "SL", "--order", "2"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment\n")
    assert main(["run", "--config", str(bad)]) == 2
    assert main(["run", "--experiment", "const_diffusion", "--set", "nope"]) == 2
    with pytest.raises(SystemExit):
        main(["table", "--id", "9"])


def test_run_failure_exit_code(capsys):
    rc = main(["run", "--experiment", "const_diffusion", "--N", "20", "--M", "1", "--set", "nu=50"])
    assert rc == 1
    assert "step 0" in capsys.readouterr().err


def test_table_command(tmp_path, capsys):
    assert main(["table", "--id", "6", "--out", str(tmp_path), "--no-timing"]) == 0
    assert (tmp_path / "table6.csv").exists()
    assert (tmp_path / "table6.txt").read_text() in capsys.readouterr().out


def test_selftest_console():
    out = subprocess.run([sys.executable, "-m", "ffsl.cli", "selftest"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert out.stdout.count("PASS") == 4
