"""Smoke tests for the dissfield Python module."""

import json
import math
import os
import pathlib

import pytest

import dissfield

CONFIGS = pathlib.Path(os.environ.get("DISSFIELD_CONFIGS", pathlib.Path(__file__).parents[2] / "configs"))


def test_version():
    assert dissfield.__version__.count(".") == 2


def test_drude_lorentz_values():
    m = dissfield.drude_lorentz(0.1, 1.0, 0.1)
    assert m.name == "drude_lorentz"
    assert m.static_chi() == pytest.approx(0.1, rel=1e-14)
    assert m.im_chi(1.0) == pytest.approx(1.0, rel=1e-14)
    assert dissfield.re_chi_kk(m, 0.5) == pytest.approx(m.chi(0.5).real, rel=1e-6)


def test_greens_and_sum_rule():
    m = dissfield.drude_lorentz(0.1, 1.0, 0.1)
    assert dissfield.greens(m, 1.0, 1.0) == pytest.approx(1j, rel=1e-12)
    assert dissfield.sum_rule(m, 1.0) == pytest.approx(1.0, abs=1e-3)


def test_weak_coupling_energy():
    r = dissfield.thermo_point(dissfield.drude_lorentz(0.001, 1.0, 0.1), 1.0, 5.0)
    assert r["U_star"] == pytest.approx(0.5 / math.tanh(0.1), rel=2e-3)


def test_vacuum_correlator():
    rows = dissfield.corr_phi(dissfield.drude_lorentz(0.001, 1.0, 0.1), 1.0, 0.0, [0.0], [0.0])
    assert rows[0][2] == pytest.approx(0.5, rel=1e-2)


def test_errors_raise():
    # chi(0) = 1.5 leaves no stable equilibrium.
    with pytest.raises(RuntimeError, match="InvalidInput"):
        dissfield.greens(dissfield.drude_lorentz(1.5, 1.0, 0.1), 1.0, 1.0)


def test_run_command(tmp_path):
    rep = dissfield.run("greens", CONFIGS / "greens_drude.ini", out=tmp_path)
    assert rep["exit_code"] == 0, rep["message"]
    names = [name for name, _ in rep["outputs"]]
    assert names == ["greens.csv", "greens_summary.json"]
    meta, cols, rows = dissfield.read_csv(tmp_path / "greens.csv")
    assert cols == ["omega", "re_G", "im_G"]
    assert len(rows) == 500
    assert dict(meta)["config_digest"] == rep["config_digest"]
    summary = json.loads((tmp_path / "greens_summary.json").read_text())
    assert abs(summary["sum_rule"] - 1.0) <= 1e-3


def test_run_config_error(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[model]\nkind = drude_lorentz\neta = 0.1\ngamma = 0.1\n")
    rep = dissfield.run("kk-check", cfg, out=tmp_path / "out")
    assert rep["exit_code"] == 2
    assert "model.omega0" in rep["message"]
