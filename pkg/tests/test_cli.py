import re

import pytest
from click.testing import CliRunner

from polyvol.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_check_catalog_entry(runner):
    result = runner.invoke(main, ["check", "tet_small"])
    assert result.exit_code == 0
    assert "StrictSkeleton" in result.output


def test_check_weak_entry(runner):
    result = runner.invoke(main, ["check", "cube_diagonal"])
    assert result.exit_code == 0
    assert "WeakBoundary" in result.output


def test_check_unknown_input(runner):
    result = runner.invoke(main, ["check", "no_such_thing"])
    assert result.exit_code == 1
    assert "no_such_thing" in result.output


def test_catalog_lists_entries(runner):
    result = runner.invoke(main, ["catalog"])
    assert result.exit_code == 0
    for name in ("tet_small", "cube", "prism", "pyramid", "cube_diagonal"):
        assert name in result.output


def test_volume_quadrature(runner):
    result = runner.invoke(main, ["volume", "tet_small", "--tol", "1e-8"])
    assert result.exit_code == 0
    m = re.search(r"Quadrature: ([0-9.e-]+)", result.output)
    assert m and float(m.group(1)) == pytest.approx(0.014376577, abs=1e-6)


def test_volume_bad_tol(runner):
    result = runner.invoke(main, ["volume", "tet_small", "--tol", "-1"])
    assert result.exit_code == 1


def test_yokota_even_r_is_config_error(runner):
    result = runner.invoke(main, ["yokota", "tet_small", "--r", "52"])
    assert result.exit_code == 1
    assert "52" in result.output


def test_yokota_bad_colors(runner):
    result = runner.invoke(main, ["yokota", "tet_small", "--r", "51",
                                  "--colors", "2,2"])
    assert result.exit_code == 1


def test_yokota_runs(runner):
    result = runner.invoke(main, ["yokota", "tet_small", "--r", "51"])
    assert result.exit_code == 0
    assert "log Y_51" in result.output


def test_deform_zero_steps_is_config_error(runner):
    result = runner.invoke(main, ["deform", "tet_small", "--edge", "0",
                                  "--steps", "0"])
    assert result.exit_code == 1
    assert "steps" in result.output


def test_deform_overshoot_is_numeric_error(runner):
    # driving the marked angle past the stratum boundary must exit 2
    result = runner.invoke(main, ["deform", "cube_diagonal",
                                  "--family", "add_diagonal",
                                  "--t0", "-0.2", "--t1", "0.0",
                                  "--steps", "4"])
    assert result.exit_code == 2


def test_deform_writes_csv_and_plot(runner, tmp_path):
    result = runner.invoke(main, ["deform", "tet_small", "--edge", "0",
                                  "--t0", "0.95", "--t1", "1.0",
                                  "--steps", "4", "--out", str(tmp_path),
                                  "--plot"])
    assert result.exit_code == 0
    csv = (tmp_path / "deform.csv").read_text()
    assert csv.startswith("# polyvol")
    assert "StrictSkeleton" in csv
    assert (tmp_path / "deform.png").stat().st_size > 0


def test_stoker_mismatch_is_numeric_error(runner):
    result = runner.invoke(main, ["stoker", "tet_small", "cube"])
    assert result.exit_code == 2


def test_stoker_self(runner, tmp_path):
    result = runner.invoke(main, ["stoker", "tet_small", "tet_small",
                                  "--out", str(tmp_path)])
    assert result.exit_code == 0
    assert "max_edge_diff: 0" in (tmp_path / "stoker.csv").read_text()


def test_volconj_even_sweep_is_config_error(runner):
    result = runner.invoke(main, ["volconj", "tet_small", "--r-min", "50",
                                  "--r-max", "80", "--r-step", "10"])
    assert result.exit_code == 1
    assert "50" in result.output


def test_config_file_merging(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("tol = 1e-7\nseed = 9\n")
    result = runner.invoke(main, ["volume", "tet_small",
                                  "--config", str(cfg)])
    assert result.exit_code == 0


def test_config_file_unknown_key(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("banana = 1\n")
    result = runner.invoke(main, ["volume", "tet_small",
                                  "--config", str(cfg)])
    assert result.exit_code == 1
    assert "banana" in result.output


def test_csv_body_reproducible(runner, tmp_path):
    args = ["volume", "tet_small", "--method", "mc", "--samples", "20000",
            "--seed", "4"]
    bodies = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        result = runner.invoke(main, args + ["--out", str(out)])
        assert result.exit_code == 0
        lines = (out / "volume.csv").read_text().splitlines()
        bodies.append([ln for ln in lines if not ln.startswith("# wall_time")])
    assert bodies[0] == bodies[1]


def test_csv_17_digit_reals(runner, tmp_path):
    result = runner.invoke(main, ["volume", "tet_small", "--tol", "1e-8",
                                  "--out", str(tmp_path)])
    assert result.exit_code == 0
    body = (tmp_path / "volume.csv").read_text().splitlines()
    row = [ln for ln in body if ln.startswith("Quadrature")][0]
    value = row.split(",")[1]
    mantissa = value.replace("-", "").replace(".", "").split("e")[0]
    assert len(mantissa.lstrip("0")) >= 15   # full double precision
