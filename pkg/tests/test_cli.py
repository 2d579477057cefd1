import csv
import json
import math

import numpy as np
import pytest

import tridephase.reservoir
from tridephase.analysis import preservation_time_zero_t
from tridephase.cli import main
from tridephase.states import ghz_state, werner


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    rows = list(csv.DictReader(text.splitlines()))
    assert rows, f"no rows in output: {text[:200]!r}"
    return rows


def test_evolve_t0_equals_initial_werner(capsys):
    code, out, _ = run(capsys, [
        "evolve", "--set", "x=0.8", "--set", "t_start=0", "--set", "t_stop=1",
        "--set", "t_count=2",
    ])
    assert code == 0
    rows = read_csv(out)
    rho0 = werner(ghz_state(), 0.8)
    first = rows[0]
    assert float(first["t"]) == 0.0
    for i in range(8):
        for j in range(8):
            assert float(first[f"re_{i}{j}"]) == pytest.approx(rho0[i, j].real, abs=1e-15)
            assert float(first[f"im_{i}{j}"]) == pytest.approx(rho0[i, j].imag, abs=1e-15)


def test_evolve_diagonal_state_constant_rows(capsys):
    code, out, _ = run(capsys, [
        "evolve", "--set", "x=0", "--set", "t_count=4", "--set", "t_stop=2",
    ])
    assert code == 0
    rows = read_csv(out)
    for key in rows[0]:
        if key == "t":
            continue
        values = {row[key] for row in rows}
        assert len(values) == 1


def test_evolve_coherence_magnitude_column(capsys):
    code, out, _ = run(capsys, [
        "evolve", "--set", "x=0.8", "--set", "eta=0.2",
        "--set", 'omega_sq_a=4', "--set", 'omega_sq_b=4', "--set", 'omega_sq_c=4',
        "--set", "t_start=0", "--set", "t_stop=1", "--set", "t_count=2",
    ])
    assert code == 0
    row = read_csv(out)[1]
    magnitude = math.hypot(float(row["re_07"]), float(row["im_07"]))
    assert magnitude == pytest.approx(0.01435872943746294, abs=1e-12)


def test_evolve_rejects_list_parameters(capsys):
    code, _, err = run(capsys, ["evolve", "--set", "x=[0.1,0.2]"])
    assert code == 1
    assert "x" in err


def test_measure_gmc_below_threshold_all_zero(capsys):
    code, out, _ = run(capsys, [
        "measure", "--set", "x=0.4", "--set", "t_count=5", "--set", "t_stop=2",
    ])
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 5
    assert all(float(r["value"]) == 0.0 for r in rows)


def test_measure_w_werner_coherence_at_t0(capsys):
    code, out, _ = run(capsys, [
        "measure", "--set", "state=w", "--set", "x=0.6",
        "--set", 'measures=["l1_coherence"]', "--set", "t_count=2", "--set", "t_stop=1",
    ])
    assert code == 0
    rows = read_csv(out)
    assert float(rows[0]["value"]) == pytest.approx(1.2, abs=1e-12)


def test_measure_gmc_at_t0(capsys):
    code, out, _ = run(capsys, [
        "measure", "--set", "x=0.8", "--set", "t_count=2", "--set", "t_stop=1",
    ])
    assert code == 0
    assert float(read_csv(out)[0]["value"]) == pytest.approx(0.65, abs=1e-12)


def test_timescales_x1_reports_inf(capsys):
    code, out, _ = run(capsys, [
        "timescales", "--set", "x=1.0", "--set", "t_count=4", "--set", "t_stop=2",
    ])
    assert code == 0
    assert read_csv(out)[0]["t_p"] == "inf"


def test_timescales_gradient_increases_preservation_time(capsys):
    base = [
        "timescales", "--set", "x=0.8", "--set", "eta=0.2",
        "--set", "omega_sq_a=12", "--set", "omega_sq_b=12", "--set", "omega_sq_c=12",
        "--set", "beta_a=0.01", "--set", "method=low_t",
        "--set", "t_count=6", "--set", "t_stop=5",
    ]
    code, out, _ = run(capsys, base + ["--set", "k1=1", "--set", "k2=1"])
    assert code == 0
    tp_equal = float(read_csv(out)[0]["t_p"])
    code, out, _ = run(capsys, base + ["--set", "k1=4", "--set", "k2=16"])
    assert code == 0
    tp_gradient = float(read_csv(out)[0]["t_p"])
    assert tp_gradient > tp_equal


def test_timescales_zero_t_matches_closed_form(capsys):
    code, out, _ = run(capsys, [
        "timescales", "--set", "x=0.8", "--set", "eta=0.2",
        "--set", "omega_sq_a=4", "--set", "omega_sq_b=4", "--set", "omega_sq_c=4",
        "--set", "t_count=4", "--set", "t_stop=3",
    ])
    assert code == 0
    t_p = float(read_csv(out)[0]["t_p"])
    assert t_p == pytest.approx(preservation_time_zero_t(0.8, 0.2, 12.0, 1.0), rel=1e-8)
    assert t_p == pytest.approx(0.6459782224702452, rel=1e-6)


def test_sweep_deterministic_output_files(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "x": [0.5, 0.8], "eta": [0.2, 0.4], "t_count": 7, "t_stop": 2.0,
        "measures": ["gmc", "l1_coherence"], "timescales": True,
    }))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        code = main(["sweep", "--config", str(config), "--out", str(out)])
        capsys.readouterr()
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = read_csv(out1.read_text())
    assert len(rows) == 2 * 2 * 7 * 2
    assert "t_p" in rows[0]


def test_json_output_with_infinity_flag(tmp_path, capsys):
    out = tmp_path / "rows.json"
    code = main([
        "timescales", "--set", "x=1.0", "--set", "t_count=3", "--set", "t_stop=1",
        "--format", "json", "--out", str(out),
    ])
    capsys.readouterr()
    assert code == 0
    rows = json.loads(out.read_text())
    assert rows[0]["t_p"] is None
    assert rows[0]["t_p_infinite"] is True


def test_config_file_and_override_precedence(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"x": 0.5, "t_count": 3, "t_stop": 1.0}))
    code, out, _ = run(capsys, [
        "measure", "--config", str(config), "--set", "x=0.8",
    ])
    assert code == 0
    assert float(read_csv(out)[0]["x"]) == 0.8


def test_unknown_config_key_named_in_error(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"cutoff": 3}))
    code, _, err = run(capsys, ["measure", "--config", str(config)])
    assert code == 1
    assert "cutoff" in err


def test_bad_method_temperature_pairing(capsys):
    code, _, err = run(capsys, ["measure", "--set", "method=low_t"])
    assert code == 1
    assert "method" in err


def test_unknown_measure_rejected(capsys):
    code, _, err = run(capsys, ["measure", "--set", 'measures=["entropy"]'])
    assert code == 1
    assert "entropy" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as excinfo:
        main(["frobnicate"])
    assert excinfo.value.code == 2


def test_selfcheck_passes(capsys):
    code, out, _ = run(capsys, ["selfcheck"])
    assert code == 0
    lines = [line for line in out.splitlines() if line]
    assert len(lines) == 5
    assert all(line.startswith("PASS") for line in lines)
    assert all("relative error" in line for line in lines)


def test_selfcheck_detects_corrupted_gamma(capsys, monkeypatch):
    true_gamma = tridephase.reservoir.gamma

    def negated(res, t, method):
        return -true_gamma(res, t, method)

    monkeypatch.setattr(tridephase.reservoir, "gamma", negated)
    code, out, _ = run(capsys, ["selfcheck"])
    assert code == 1
    assert "FAIL" in out
