"""Command line and run records."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from ecvqe import cli, io
from ecvqe.models import schwinger_projector
from ecvqe.pauli import PauliSum


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bundled_configs_validate():
    names = io.bundled_configs()
    assert {"ising_L8_ground.json", "potts_L4_ground.json", "schwinger_L8_ground.json"} <= set(names)
    for name in names:
        doc = io.load_config(name)
        assert doc["name"] == name[:-5]


@pytest.mark.parametrize("name,bound", [("ising_L8_ground", 1e-2), ("potts_L4_ground", 1e-3)])
def test_run_bundled_ground_state(name, bound, tmp_path, capsys):
    code, out, _ = run_cli(["run", name, "--outdir", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads((tmp_path / f"{name}.summary.json").read_text())
    assert summary["status"] == "ok"
    assert summary["states"][0]["N"] == 2
    assert summary["rel_error"] < bound
    assert summary["energy"] >= summary["reference"] - 1e-9
    labels = summary["states"][0]["labels"]
    assert labels["T"][0] > 0.99
    if name.startswith("potts"):
        assert labels["C"] > 0.99 and labels["domain_walls"] < 0.5
    rows = [json.loads(line) for line in (tmp_path / f"{name}.trace.jsonl").read_text().splitlines()]
    assert set(rows[0]) == {"state", "iter", "N", "cost", "energy", "grad_norm", "wall_ms", "elapsed_ms"}
    elapsed = [r["elapsed_ms"] for r in rows]
    assert elapsed == sorted(elapsed)
    with open(tmp_path / f"{name}.plot.csv", newline="") as fh:
        reader = csv.reader(fh)
        assert tuple(next(reader)) == io.PLOT_COLUMNS
    plot = io.read_plot(tmp_path / f"{name}.plot.csv")
    assert {r["series"] for r in plot} == {"iteration", "depth", "state"}
    assert [r["N"] for r in plot if r["series"] == "depth"] == [1.0, 2.0]


def test_rerun_is_reproducible(tmp_path):
    doc = io.load_config("potts_L4_ground")
    a = io.run(doc, tmp_path / "a")
    b = io.run(doc, tmp_path / "b")
    assert a.summary["states"][0]["params"] == b.summary["states"][0]["params"]
    assert a.summary["energy"] == b.summary["energy"]


def test_seed_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv(io.SEED_ENV, "17")
    rec = io.run(io.load_config("ising_L8_ground"), tmp_path, with_reference=False)
    assert rec.summary["seed"] == 17
    assert rec.summary["reference"] is None


def test_missing_learning_rate_exits_2(tmp_path, capsys):
    doc = io.load_config("ising_L8_ground")
    del doc["optimizer"]["lr"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    out_dir = tmp_path / "out"
    code, _, err = run_cli(["run", str(path), "--outdir", str(out_dir)], capsys)
    assert code == 2
    assert "lr" in err
    assert not out_dir.exists()


@pytest.mark.parametrize(
    "patch",
    [
        {"model": {"kind": "potts", "L": 7, "couplings": {"g": 0.1, "h": 0.1}}},
        {"model": {"kind": "ising", "L": 8, "couplings": {"g": 1.0}}},
        {"circuit": {"tying": "r5"}},
        {"unknown": 1},
    ],
)
def test_schema_violations(patch):
    doc = io.load_config("ising_L8_ground")
    doc.update(patch)
    with pytest.raises(io.ConfigError):
        io.validate_config(doc)


def test_divergence_exits_3_and_keeps_trace(tmp_path, capsys):
    doc = io.load_config("ising_L8_ground")
    doc["name"] = "nan_run"
    doc["model"]["couplings"]["g"] = float("nan")
    path = tmp_path / "nan.json"
    path.write_text(json.dumps(doc))
    code, _, err = run_cli(["run", str(path), "--outdir", str(tmp_path)], capsys)
    assert code == 3 and "diverged" in err
    assert (tmp_path / "nan_run.trace.jsonl").read_text().strip()
    assert json.loads((tmp_path / "nan_run.summary.json").read_text())["status"] == "diverged"


def test_ed_sector_map(capsys):
    code, out, _ = run_cli(["ed", "--model", "ising", "--L", "8", "--g", "1", "--h", "0.156", "--k", "60", "--sectors"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["sector"] == {"T": 0}
    assert doc["sector_index_map"][7] == 48


def test_ed_missing_coupling_exits_2(capsys):
    code, _, err = run_cli(["ed", "--model", "schwinger", "--L", "4", "--m", "0.5"], capsys)
    assert code == 2 and "--g" in err


def test_kak_identity(capsys):
    code, out, _ = run_cli(["kak", "--gate", "identity", "--netlist"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert np.allclose(doc["interaction_coefficients"], 0)
    assert doc["reconstruction_error"] < 1e-10
    assert len(doc["netlist"]) == 8


def test_kak_matrix_file(tmp_path, capsys):
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"re": q.real.tolist(), "im": q.imag.tolist()}))
    code, out, _ = run_cli(["kak", "--matrix", str(path)], capsys)
    assert code == 0 and json.loads(out)["reconstruction_error"] < 1e-10


def test_dump_hamiltonian_matches_projector_construction(capsys):
    code, out, _ = run_cli(["dump-hamiltonian", "--model", "schwinger", "--L", "4", "--m", "0.5", "--g", "0.3"], capsys)
    assert code == 0
    H = PauliSum.from_json(out)
    assert H.is_hermitian()
    L, m, g = 4, 0.5, 0.3
    P = [schwinger_projector(j, L).to_dense() for j in range(1, L + 1)]
    X = np.array([[0, 1], [1, 0]])
    Y = np.array([[0, -1j], [1j, 0]])

    def pair(op, j):
        mats = [np.eye(2)] * L
        mats[j] = mats[j + 1] = op
        out = mats[0]
        for mm in mats[1:]:
            out = np.kron(out, mm)
        return out

    ref = sum(0.5 * (pair(X, j) + pair(Y, j)) for j in range(L - 1)) + m * sum(P)
    E = np.zeros((16, 16))
    for j in range(L - 1):
        E = E + (-1) ** (j + 1) * P[j]
        ref = ref + g**2 / 2 * E @ E
    assert np.abs(H.to_dense() - ref).max() < 1e-12


def test_configs_listing(capsys):
    code, out, _ = run_cli(["configs", "--schema"], capsys)
    assert code == 0 and "ising_L8_ground.json" in out and '"optimizer"' in out
