import json

import numpy as np
import pytest

from lensdelay.cli import main


def test_geometry_report(tmp_path, capsys):
    out = tmp_path / "geom.json"
    assert main(["--out", str(out), "geometry", "--mass-msun", "1.0", "--u", "1.0"]) == 0
    report = json.loads(out.read_text())
    assert abs(report["A"] - 1.3416) < 1e-3
    assert abs(report["delta_t_s"] - 4.1e-5) / 4.1e-5 < 0.02
    assert "theta_E_rad = " in capsys.readouterr().out


def test_yield_report(tmp_path):
    out = tmp_path / "yield.json"
    csv_out = tmp_path / "integrand.csv"
    assert main(["--out", str(out), "yield", "--area", "152",
                 "--integrand-csv", str(csv_out)]) == 0
    report = json.loads(out.read_text())
    assert 55 <= report["n_sig"] <= 80
    assert abs(report["Q"] - 0.386) < 0.03
    assert csv_out.read_text().splitlines()[0] == "wavelength_nm,tau,signal_integrand"


def test_dust_summary(tmp_path, capsys):
    out = tmp_path / "dust.csv"
    assert main(["--seed", "3", "--trials", "500", "--out", str(out), "dust"]) == 0
    printed = capsys.readouterr().out
    assert "mean_fraction" in printed
    rows = out.read_text().splitlines()
    assert rows[1] == "trial,fraction"
    assert len(rows) == 2 + 500


def test_capacity_small(tmp_path):
    out = tmp_path / "cap.json"
    assert main(["--out", str(out), "--param", "omega0_tc=200",
                 "--param", "T_over_tc=200", "capacity"]) == 0
    report = json.loads(out.read_text())
    assert 0.29 < report["chi_nats"] < 0.32


def test_curve_and_demo_and_flares(tmp_path):
    curve = tmp_path / "curve.csv"
    assert main(["--seed", "1", "--trials", "10", "--out", str(curve),
                 "--param", "T_over_tc=300", "--param", "n_sig_list=[50]",
                 "curve"]) == 0
    assert curve.read_text().splitlines()[1].startswith("n_sig,")

    demo = tmp_path / "demo.csv"
    assert main(["--seed", "1", "--out", str(demo),
                 "--param", "T_over_tc=300", "--param", "m=2",
                 "--param", "n_sig=40", "--param", "n_bg=20",
                 "--param", "delta_t0_tc=150", "demo"]) == 0
    assert demo.exists()

    flares = tmp_path / "flares.csv"
    assert main(["--seed", "1", "--trials", "300", "--out", str(flares),
                 "--param", "T_over_tc=300", "--param", "n_sig_list=[100]",
                 "--param", "confidence=0.5", "--param", "m_cap=16",
                 "flares"]) == 0
    assert flares.read_text().splitlines()[1] == "n_sig,m_required,bound_m"


def test_array_demo(tmp_path, capsys):
    out = tmp_path / "array.csv"
    assert main(["--seed", "2", "--out", str(out), "array"]) == 0
    printed = capsys.readouterr().out
    assert "recovered_delays" in printed
    assert out.read_text().splitlines()[1] == "tau,score"


def test_simulate_estimate_roundtrip(tmp_path, capsys):
    photons = tmp_path / "photons.csv"
    assert main(["--seed", "5", "--out", str(photons),
                 "--param", "T_over_tc=300", "simulate",
                 "--n", "400", "--delta-t", "150"]) == 0
    report = tmp_path / "est.json"
    assert main(["--out", str(report), "--param", "T_over_tc=300",
                 "estimate", str(photons)]) == 0
    est = json.loads(report.read_text())
    assert abs(est["tau_hat"] - 150.0) <= 1.0
    assert est["detected"] is True


def test_config_file_formats(tmp_path):
    json_cfg = tmp_path / "cfg.json"
    json_cfg.write_text('{"T_over_tc": 300, "n_sig_list": [60]}')
    out = tmp_path / "c1.csv"
    assert main(["--trials", "5", "--config", str(json_cfg), "--out", str(out),
                 "curve"]) == 0

    kv_cfg = tmp_path / "cfg.txt"
    kv_cfg.write_text("T_over_tc = 300  # window\nn_sig_list = [60]\n")
    out2 = tmp_path / "c2.csv"
    assert main(["--trials", "5", "--config", str(kv_cfg), "--out", str(out2),
                 "curve"]) == 0
    # identical params + seed => identical rows
    assert out.read_text().splitlines()[1:] == out2.read_text().splitlines()[1:]
