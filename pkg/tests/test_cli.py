import io
import json
import math

import numpy as np
import pytest

from pibox.cli import main


def run_cli(args, tmp_path=None):
    import contextlib

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


def parse_csv(text):
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


def test_spectrum_dirichlet_levels():
    code, out = run_cli(["spectrum", "--bc", "dirichlet", "--levels", "3"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == ["index", "k_or_kappa", "E", "residual", "method"]
    energies = [float(r[2]) for r in rows]
    for l, e in enumerate(energies, start=1):
        assert e == pytest.approx(math.pi**2 * l**2 / 2.0, rel=1e-12)
    assert all(r[4] == "continuum_root" for r in rows)


def test_spectrum_bound_states():
    code, out = run_cli(["spectrum", "--gamma", "-5", "-5", "--bound-states", "--levels", "4"])
    assert code == 0
    _, _, rows = parse_csv(out)
    energies = [float(r[2]) for r in rows]
    assert energies[0] < energies[1] < 0 < energies[2]
    assert energies[0] == pytest.approx(-12.820164684696566, abs=1e-6)


def test_spectrum_compare_agreement():
    code, out = run_cli(["spectrum", "--N", "99", "--gamma", "2", "2", "--compare"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert "agreement" in header
    agreements = [float(r[header.index("agreement")]) for r in rows]
    assert max(agreements) <= 1e-9


def test_spectrum_rejects_bad_config():
    code, _ = run_cli(["spectrum", "--levels", "-3"])
    assert code == 2
    code, _ = run_cli(["spectrum", "--bc", "robin"])
    assert code == 2
    code, _ = run_cli(["spectrum", "--N", "10", "--method", "lattice-eig"])
    assert code == 2


def test_momentum_lattice_failure_exit_code():
    # too-large extension parameters push roots off the real window
    code, _ = run_cli(["momentum", "--ell", "3", "3", "--N", "9"])
    assert code == 3


def test_momentum_compare():
    code, out = run_cli(["momentum", "--N", "9", "--compare"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    ks = [float(r[header.index("k")]) for r in rows]
    assert np.allclose(ks, math.pi * np.arange(-4, 5), atol=1e-10)
    agreements = [float(r[header.index("agreement")]) for r in rows]
    assert max(agreements) <= 1e-10


def test_measure_dirichlet_table():
    code, out = run_cli(["measure", "--bc", "dirichlet", "--level", "1", "--cutoff", "8"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert float(meta["delta_k"]) == pytest.approx(math.pi, rel=1e-15)
    assert float(meta["total_probability"]) == pytest.approx(1.0, abs=1e-6)
    assert abs(float(meta["p_r_expectation"])) <= 1e-10
    probs = {int(r[0]): float(r[2]) for r in rows}
    assert probs[1] == 0.25 and probs[-1] == 0.25
    assert probs[0] == pytest.approx(4.0 / math.pi**2, rel=1e-12)
    # cumulative column is a running sum
    assert float(rows[-1][3]) == pytest.approx(sum(probs.values()), rel=1e-12)


def test_measure_neumann_json_summary():
    code, out = run_cli(["measure", "--bc", "neumann", "--level", "0", "--cutoff", "4",
                         "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["delta_k"] == "inf"
    assert doc["meta"]["total_probability"] == pytest.approx(1.0, abs=1e-6)
    by_n = {row["n"]: row["probability"] for row in doc["data"]}
    assert by_n[0] == 0.5
    assert by_n[1] == pytest.approx(2.0 / math.pi**2, rel=1e-12)


def test_measure_quadrature_robin():
    code, out = run_cli(["measure", "--gamma", "2", "2", "--level", "0",
                         "--cutoff", "16", "--method", "quadrature"])
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert float(meta["total_probability"]) == pytest.approx(1.0, abs=1e-6)


def test_measure_closed_form_guard():
    code, _ = run_cli(["measure", "--gamma", "2", "2", "--level", "0"])
    assert code == 2  # closed form only for hard walls / free-end ground


def test_converge_energy_json():
    code, out = run_cli(["converge", "--observable", "energy", "--bc", "dirichlet",
                         "--level", "1", "--N-list", "27", "81", "243"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["fitted_order"] >= 1.8
    assert len(doc["data"]) == 3
    errs = [row["error"] for row in doc["data"]]
    assert errs[0] > errs[1] > errs[2]


def test_converge_momentum_json():
    code, out = run_cli(["converge", "--observable", "momentum", "--level", "1",
                         "--N-list", "27", "81", "243"])
    assert code == 0
    doc = json.loads(out)
    assert 1.8 <= doc["meta"]["fitted_order"] <= 2.2


def test_converge_rejects_short_list():
    code, _ = run_cli(["converge", "--observable", "energy", "--bc", "dirichlet",
                       "--level", "1", "--N-list", "27"])
    assert code == 2


def test_fourier_output():
    code, out = run_cli(["fourier", "--level", "1", "--samples", "11"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == ["k", "density"]
    assert len(rows) == 11
    assert float(meta["delta_k"]) == pytest.approx(math.pi, rel=0.005)


def test_selfcheck_passes():
    code, out = run_cli(["selfcheck"])
    assert code == 0
    assert "FAIL" not in out
    assert out.strip().endswith("checks passed")


def test_output_file_and_determinism(tmp_path):
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    for p in (p1, p2):
        code, _ = run_cli(["spectrum", "--bc", "dirichlet", "--levels", "4",
                           "--seed", "7", "--output", str(p)])
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_json_determinism():
    _, out1 = run_cli(["measure", "--bc", "dirichlet", "--level", "2",
                       "--cutoff", "6", "--format", "json"])
    _, out2 = run_cli(["measure", "--bc", "dirichlet", "--level", "2",
                       "--cutoff", "6", "--format", "json"])
    assert out1 == out2


def test_config_file_merging(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"bc": "dirichlet", "levels": 2, "format": "json"}))
    code, out = run_cli(["spectrum", "--config", str(config)])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["data"]) == 2
    # explicit flags override the file
    code, out = run_cli(["spectrum", "--config", str(config), "--levels", "5"])
    doc = json.loads(out)
    assert len(doc["data"]) == 5


def test_config_file_unknown_key(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"no_such_option": 1}))
    code, _ = run_cli(["spectrum", "--config", str(config)])
    assert code == 2


def test_metadata_echoes_parameters():
    _, out = run_cli(["spectrum", "--bc", "neumann", "--levels", "2", "--seed", "42"])
    meta, _, _ = parse_csv(out)
    assert meta["gamma_plus"] == "0" and meta["gamma_minus"] == "0"
    assert meta["seed"] == "42"
    assert meta["command"] == "spectrum"
