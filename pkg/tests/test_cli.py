import csv
import json
import math

import numpy as np
import pytest

from landauspec.cli import main


def write_config(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_radial_eigs_rank_one_fixture(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "profile": {"kind": "gaussian", "rate": 1.0, "amplitude": 2.0},
        "count": 6,
    })
    out = tmp_path / "out"
    assert main(["radial-eigs", "--config", cfg, "--out", str(out)]) == 0
    header, rows = read_csv(out / "radial_eigs.csv")
    assert header == ["k", "mu_w", "mu_aw", "mu_w_fourier"]
    # 2 pi Psi_0 fixture: mu_w row 0 is 2 pi * 1/(2 pi) = 1
    assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-9)
    assert abs(float(rows[3][1])) < 1e-9
    # fourier column agrees with the direct one
    for r in rows:
        assert float(r[3]) == pytest.approx(float(r[1]), abs=1e-9)


def test_radial_eigs_constant_profile(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "profile": {"kind": "constant", "value": 0.7}, "count": 5})
    out = tmp_path / "out"
    assert main(["radial-eigs", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out / "radial_eigs.csv")
    for r in rows:
        assert float(r[1]) == pytest.approx(0.7, abs=1e-10)
        assert float(r[2]) == pytest.approx(0.7, abs=1e-10)


def test_malformed_config_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["radial-eigs", "--config", str(bad), "--out", str(tmp_path)]) == 2
    cfg = write_config(tmp_path, "c2.json", {"profile": {"kind": "nope"}, "count": 4})
    assert main(["radial-eigs", "--config", cfg, "--out", str(tmp_path)]) == 2
    cfg = write_config(tmp_path, "c3.json", {"count": 4})
    assert main(["radial-eigs", "--config", cfg, "--out", str(tmp_path)]) == 2
    cfg = write_config(tmp_path, "c4.json", {
        "profile": {"kind": "gaussian", "rate": 1.0}, "count": 4, "bogus": 1})
    assert main(["radial-eigs", "--config", cfg, "--out", str(tmp_path)]) == 2
    missing = str(tmp_path / "does_not_exist.json")
    assert main(["radial-eigs", "--config", missing, "--out", str(tmp_path)]) == 2


def test_spectrum_zero_symbol(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "b": 1.5, "levels": 3, "radial": 4, "sign": "+",
        "symbol": {"separable": {"terms": []}},
    })
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "spectrum.json").read_text())
    eigs = np.array(data["eigenvalues"])
    expect = np.repeat(1.5 * (2 * np.arange(3) + 1.0), 4)
    assert np.abs(np.sort(eigs) - expect).max() < 1e-10
    assert all(w["count"] == 0 for w in data["windows"])
    _, rows = read_csv(out / "eigenvalues.csv")
    assert len(rows) == 12


def test_spectrum_prescribed_gap_fixture(tmp_path):
    # one planted eigenvalue at 0.6 below level 0 plus the level-kernel DSL
    coeff = (2 * math.pi) ** 2 * 0.4
    cfg = write_config(tmp_path, "c.json", {
        "b": 1.0, "levels": 3, "radial": 6, "sign": "-",
        "symbol": {"separable": {"frame": "lab", "terms": [
            {"coeff": coeff, "A": {"kind": "level_kernel", "q": 0},
             "B": {"kind": "level_kernel", "q": 0}}]}},
    })
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "spectrum.json").read_text())
    eigs = np.array(data["eigenvalues"])
    assert np.abs(eigs - 0.6).min() < 1e-8
    counts = {(w["q"], w["side"]): w["count"] for w in data["windows"]}
    assert counts[(0, "-")] == 1


def test_toeplitz_exponential_residual(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "zeta": {"kind": "exp_beta", "gamma": 1.0, "beta": 1.0},
        "b": 2.0, "q": 0, "count": 40, "model": {"kind": "exp"},
    })
    out = tmp_path / "out"
    assert main(["toeplitz", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out / "toeplitz.csv")
    assert len(rows) == 40
    # residual column constant -ln(1 + mu), mu = 1
    res = [float(r[4]) for r in rows[2:]]
    assert max(res) - min(res) < 1e-10
    assert res[0] == pytest.approx(-math.log(2.0), rel=1e-10)
    assert float(rows[5][1]) == pytest.approx(2.0 ** -6.0, rel=1e-10)


def test_toeplitz_empty_range(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "zeta": {"kind": "gaussian", "rate": 1.0}, "b": 1.0, "count": 0})
    out = tmp_path / "out"
    assert main(["toeplitz", "--config", cfg, "--out", str(out)]) == 0
    header, rows = read_csv(out / "toeplitz.csv")
    assert rows == [] and header[0] == "k"


def test_capacity_command_and_determinism(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "set": {"kind": "disk", "center": [0.0, 0.0], "radius": 1.0},
        "j_max": 12, "restarts": 3, "seed": 5})
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["capacity", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["capacity", "--config", cfg, "--out", str(out2)]) == 0
    b1 = (out1 / "capacity.json").read_bytes()
    b2 = (out2 / "capacity.json").read_bytes()
    assert b1 == b2    # byte-identical rerun
    data = json.loads(b1)
    assert data["estimate"] == pytest.approx(1.0, rel=0.06)
    assert data["lower_cert"] <= data["estimate"]


def test_asymptotics_command(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "kind": "exp", "beta": 2.0, "gamma": 1.0, "b": 2.0, "k_range": [2, 20]})
    out = tmp_path / "out"
    assert main(["asymptotics", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "asymptotics.json").read_text())
    assert data["model"]["mu"] == pytest.approx(1.0)
    assert data["model"]["coefficients"][0] == pytest.approx(2.0 ** -0.5, abs=1e-8)


def test_construct_gaps_command(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "b": 1.0, "multiplicities": [2, 0, 1],
        "level_scales": [0.8, 0.5, 0.3], "index_scales": [0.5, 0.25],
        "verify": True, "levels": 4, "radial": 8})
    out = tmp_path / "out"
    assert main(["construct-gaps", "--config", cfg, "--out", str(out)]) == 0
    data = json.loads((out / "construct_gaps.json").read_text())
    assert data["gap_counts"] == [2, 0, 1]
    assert max(data["eigenvalue_errors"]) < 1e-8
    vals = sorted(p["eigenvalue"] for p in data["predicted"])
    assert vals == pytest.approx([0.6, 0.8, 4.85])


def test_construct_gaps_invalid_scales(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "b": 1.0, "multiplicities": [0, 1], "level_scales": [0.8, 2.5],
        "index_scales": [0.5]})
    assert main(["construct-gaps", "--config", cfg, "--out", str(tmp_path)]) == 2


def test_verify_command(tmp_path, capsys):
    assert main(["verify", "--filter", "symplectic"]) == 0
    assert "pass" in capsys.readouterr().out
    # mutation check: the planted phase error must be caught
    assert main(["verify", "--filter", "wigner-closed-form",
                 "--inject-fault", "pair_phase_sign"]) == 1
    assert main(["verify", "--filter", "no-such-suite"]) == 2
