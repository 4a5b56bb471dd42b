"""Command-line interface: exit codes, reports, emitted artifacts."""

import json

import numpy as np
import pytest

from msechart.cli import EXIT_CONFIG, EXIT_OK, emit_plot_script, main
from msechart.io import SchemaError, read_mmse_snr_csv


def test_phi_table_writes_csv(tmp_path):
    out = tmp_path / "phi.csv"
    rc = main(["phi-table", "--grid-min", "0.01", "--grid-max", "5",
               "--grid-points", "12", "--out", str(out)])
    assert rc == EXIT_OK
    curve = read_mmse_snr_csv(out)
    assert curve.gamma.size == 12
    assert np.all(np.diff(curve.mmse) < 0)


def test_curve_and_area_analytic_preset(tmp_path):
    out = tmp_path / "rep.csv"
    rc = main(["curve", "--code", "rep-4", "--grid-min", "0.001",
               "--grid-max", "50", "--grid-points", "40", "--out", str(out)])
    assert rc == EXIT_OK
    rep = tmp_path / "area.json"
    rc = main(["area", "--code", "rep-4", "--grid-min", "0.0001",
               "--grid-max", "100", "--grid-points", "300",
               "--out", str(rep)])
    assert rc == EXIT_OK
    doc = json.loads(rep.read_text())
    assert doc["results"]["rate_estimate"] == pytest.approx(0.25, abs=2e-3)
    assert doc["config"]["code"] == "rep-4"   # reproducibility echo


def test_unknown_preset_is_config_error(tmp_path):
    rc = main(["area", "--code", "no-such"])
    assert rc == EXIT_CONFIG


def test_config_file_roundtrip(tmp_path):
    cfg = tmp_path / "code.json"
    cfg.write_text(json.dumps({"type": "repetition", "n": 2}))
    out = tmp_path / "c.csv"
    rc = main(["curve", "--config", str(cfg), "--grid-min", "0.01",
               "--grid-max", "10", "--grid-points", "10", "--out", str(out)])
    assert rc == EXIT_OK


def test_bad_config_file_cites_key(tmp_path, capsys):
    cfg = tmp_path / "code.json"
    cfg.write_text(json.dumps({"type": "conv", "feedforward": []}))
    rc = main(["curve", "--config", str(cfg), "--out", str(tmp_path / "c.csv")])
    assert rc == EXIT_CONFIG
    assert "feedforward" in capsys.readouterr().err


def test_threshold_command(tmp_path):
    rep = tmp_path / "th.json"
    rc = main(["threshold", "--profile", "regular-3-6", "--lo-db", "0.5",
               "--hi-db", "2.5", "--tol-db", "0.05", "--out", str(rep)])
    assert rc == EXIT_OK
    doc = json.loads(rep.read_text())
    assert 0.9 < doc["results"]["threshold_ebn0_db"] < 1.3


def test_threshold_bad_bracket_is_config_error():
    rc = main(["threshold", "--profile", "regular-3-6",
               "--lo-db", "2.0", "--hi-db", "3.0"])
    assert rc == EXIT_CONFIG


def test_trajectory_command(tmp_path):
    rep = tmp_path / "tr.json"
    csv = tmp_path / "tr.csv"
    rc = main(["trajectory", "--profile", "regular-3-6", "--ebn0-db", "1.5",
               "--out", str(rep), "--steps-csv", str(csv)])
    assert rc == EXIT_OK
    doc = json.loads(rep.read_text())
    assert doc["results"]["converged"]
    assert csv.read_text().splitlines()[0] == "iteration,mmse_check,mmse_bit"


def test_plot_script_emission(tmp_path):
    out = tmp_path / "phi.csv"
    main(["phi-table", "--grid-min", "0.01", "--grid-max", "5",
          "--grid-points", "8", "--out", str(out)])
    script = tmp_path / "plot.py"
    rc = main(["plot-script", "--csv", str(out), "--kind", "mmse_snr",
               "--out", str(script)])
    assert rc == EXIT_OK
    text = script.read_text()
    assert "matplotlib" in text and str(out) in text


def test_plot_script_schema_mismatch_names_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("gamma,wrong,stderr\n0.0,1.0,0.0\n")
    with pytest.raises(SchemaError, match="mmse"):
        emit_plot_script([str(bad)], "mmse_snr", str(tmp_path / "p.py"))
    rc = main(["plot-script", "--csv", str(bad), "--kind", "mmse_snr",
               "--out", str(tmp_path / "p.py")])
    assert rc == EXIT_CONFIG


def test_verify_fast_report(tmp_path):
    rep = tmp_path / "verify.json"
    rc = main(["verify", "--fast", "--seed", "0", "--out", str(rep)])
    assert rc == EXIT_OK
    doc = json.loads(rep.read_text())
    assert doc["pass"]
    assert doc["config"]["seed"] == 0
    names = {c["name"] for c in doc["checks"]}
    assert "immse-identity-max-deviation" in names
    assert "bcjr-vs-exhaustive-app" in names
