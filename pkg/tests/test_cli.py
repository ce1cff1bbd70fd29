"""Tests for the command-line front end: output encodings, config
precedence, exit codes and the machine-readable record schema."""

import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from specgap.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


# ---------------------------------------------------------------------------
# bound: encodings carry identical content

def test_bound_json_schema(runner):
    res = runner.invoke(cli, ["bound", "-n", "3", "-K", "1", "-D", "2",
                              "--format", "json"])
    assert res.exit_code == 0, res.output
    rec = json.loads(res.output)
    assert rec["schema_version"] == "1"
    assert rec["query"]["n"] == 3.0
    assert rec["query"]["K"] == 1.0
    assert rec["query"]["D"] == 2.0
    assert rec["results"]["model_lambda1"] > rec["results"]["shi_zhang"]
    assert all(rec["flags"].values())
    assert rec["timings"]["compute_s"] >= 0.0


def test_bound_formats_agree(runner):
    args = ["bound", "-n", "3", "-K", "-1", "-D", "1"]
    js = json.loads(runner.invoke(cli, args + ["--format", "json"]).output)
    crow = next(csv.DictReader(
        io.StringIO(runner.invoke(cli, args + ["--format", "csv"]).output)))
    for key in ("model_lambda1", "shi_zhang", "zhong_yang", "yang"):
        assert float(crow[f"results.{key}"]) == pytest.approx(
            js["results"][key], rel=1e-12)
    table = runner.invoke(cli, args).output
    assert "model_lambda1" in table


def test_bound_table_is_default(runner):
    res = runner.invoke(cli, ["bound", "-n", "4", "-K", "0", "-D", "1.5"])
    assert res.exit_code == 0
    assert "model_lambda1" in res.output
    assert "," not in res.output  # aligned table, not csv


# ---------------------------------------------------------------------------
# exit codes and validation

def test_missing_flags_exit_2(runner):
    res = runner.invoke(cli, ["bound", "-n", "3"])
    assert res.exit_code == 2
    assert "-K" in res.output or "curv" in res.output


def test_domain_error_exit_2(runner):
    res = runner.invoke(cli, ["bound", "-n", "3", "-K", "1", "-D", "-1"])
    assert res.exit_code == 2
    res = runner.invoke(cli, ["bound", "-n", "3", "-K", "1", "-D", "4"])
    assert res.exit_code == 2  # beyond the closing diameter


def test_numerical_error_exit_3(runner):
    # a target twelve decades down cannot be resolved before the decay
    # collapse guard fires, so the run ends with a numerical failure
    res = runner.invoke(cli, ["match", "-N", "3", "-K", "-1",
                              "-l", "1.0", "-u", "1e-12"])
    assert res.exit_code == 3
    assert "certificate" in res.output.lower()


def test_infeasible_delta_exit_2(runner):
    res = runner.invoke(cli, ["perturb", "-n", "3", "-d", "0.3",
                              "-l", "1", "-K", "1"])
    assert res.exit_code == 2


# ---------------------------------------------------------------------------
# config files

def test_config_supplies_defaults(runner, tmp_path):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("n = 3\nK = 1\nD = 2\n")
    res = runner.invoke(cli, ["--config", str(cfg), "bound",
                              "--format", "json"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["query"]["D"] == 2.0


def test_flags_override_config(runner, tmp_path):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("n = 3\nK = 1\nD = 2\nalpha = 0.5\n")
    res = runner.invoke(cli, ["--config", str(cfg), "bound",
                              "-D", "1.0", "--format", "json"])
    rec = json.loads(res.output)
    assert rec["query"]["D"] == 1.0  # flag wins
    assert rec["query"]["alpha"] == 0.5  # config fills the default


def test_config_malformed_reports_line(runner, tmp_path):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("n = 3\nwhat even is this\n")
    res = runner.invoke(cli, ["--config", str(cfg), "bound"])
    assert res.exit_code == 2
    assert "line 2" in res.output


# ---------------------------------------------------------------------------
# sweep

def test_sweep_single_point_matches_bound(runner, tmp_path):
    grid = tmp_path / "g.txt"
    grid.write_text("n = 3\nK = -1\nD = 1\n")
    srow = next(csv.DictReader(io.StringIO(
        runner.invoke(cli, ["sweep", str(grid)]).output)))
    js = json.loads(runner.invoke(
        cli, ["bound", "-n", "3", "-K", "-1", "-D", "1",
              "--format", "json"]).output)
    assert float(srow["results.model_lambda1"]) == pytest.approx(
        js["results"]["model_lambda1"], rel=1e-12)


def test_sweep_grid_order_and_size(runner, tmp_path):
    grid = tmp_path / "g.txt"
    grid.write_text("n = 3 4\nK = 0  # flat row\nD = 1, 2\n")
    rows = list(csv.DictReader(io.StringIO(
        runner.invoke(cli, ["sweep", str(grid)]).output)))
    assert len(rows) == 4
    assert [r["query.n"] for r in rows] == ["3", "3", "4", "4"]
    assert [r["query.D"] for r in rows] == ["1", "2", "1", "2"]


def test_sweep_malformed_grid(runner, tmp_path):
    grid = tmp_path / "g.txt"
    grid.write_text("n = 3\nbogus := 1\n")
    res = runner.invoke(cli, ["sweep", str(grid)])
    assert res.exit_code == 2
    assert "line 2" in res.output
    grid.write_text("n = 3\nK = 0\n")
    res = runner.invoke(cli, ["sweep", str(grid)])
    assert res.exit_code == 2  # missing D axis
    grid.write_text("n = 3\nn = 4\nK = 0\nD = 1\n")
    res = runner.invoke(cli, ["sweep", str(grid)])
    assert res.exit_code == 2
    assert "duplicate" in res.output


def test_sweep_thread_env(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("SPECGAP_THREADS", "2")
    grid = tmp_path / "g.txt"
    grid.write_text("n = 3\nK = 0\nD = 1 2 3\n")
    res = runner.invoke(cli, ["sweep", str(grid)])
    assert res.exit_code == 0
    assert len(res.output.strip().splitlines()) == 4  # header + 3 rows


# ---------------------------------------------------------------------------
# match / jsolve / perturb / verify records

def test_match_record(runner):
    res = runner.invoke(cli, ["match", "-N", "3", "-K", "-1", "-l", "2",
                              "-u", "0.5", "--format", "json"])
    assert res.exit_code == 0, res.output
    rec = json.loads(res.output)
    assert rec["results"]["case"] == "neg-super-tanh"
    assert abs(rec["results"]["residual"]) < 1e-8
    assert rec["results"]["m_min"] == pytest.approx(0.0278749, rel=1e-4)
    assert rec["flags"]["converged"]
    assert not rec["flags"]["boundary"]


def test_match_subthreshold_m_min_is_nan_string(runner):
    res = runner.invoke(cli, ["match", "-N", "3", "-K", "-1", "-l", "0.9",
                              "-u", "0.5", "--format", "json"])
    assert res.exit_code == 0, res.output
    rec = json.loads(res.output)
    assert rec["results"]["m_min"] == "nan"
    assert rec["results"]["case"] == "neg-sub"


def test_jsolve_record(runner, tmp_path):
    prof = tmp_path / "prof.csv"
    rows = ["t,rho"]
    for i in range(65):
        t = 2 * math.pi * i / 64.0
        rho = 2.0 - 0.5 * math.exp(-8.0 * (t - math.pi) ** 2)
        rows.append(f"{t},{rho}")
    prof.write_text("\n".join(rows) + "\n")
    res = runner.invoke(cli, ["jsolve", str(prof), "-L", str(2 * math.pi),
                              "-n", "3", "-K", "1", "--mesh", "256",
                              "--format", "json"])
    assert res.exit_code == 0, res.output
    rec = json.loads(res.output)
    assert rec["results"]["sigma"] > 0.0
    assert rec["results"]["k_bar"] > 0.0
    assert rec["flags"]["positive"] and rec["flags"]["sigma_nonneg"]


def test_perturb_record(runner):
    res = runner.invoke(cli, ["perturb", "-n", "3", "-d", "0.1",
                              "-l", "1", "-K", "1", "--format", "json"])
    assert res.exit_code == 0, res.output
    rec = json.loads(res.output)
    assert rec["results"]["N"] == pytest.approx(5.000005, rel=1e-9)
    assert rec["results"]["beta"] == pytest.approx(1.0 / 36.0, rel=1e-9)
    assert all(rec["flags"].values())


def test_verify_filter(runner):
    res = runner.invoke(cli, ["verify", "sphere", "--format", "json"])
    assert res.exit_code == 0, res.output
    recs = json.loads(res.output)
    assert len(recs) >= 3
    assert all(r["flags"]["ok"] for r in recs)


def test_verify_unknown_filter(runner):
    res = runner.invoke(cli, ["verify", "dodecahedron"])
    assert res.exit_code == 2
