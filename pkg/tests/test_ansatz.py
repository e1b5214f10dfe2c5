"""Euler-Cartan brick walls: parameter counts, block matrices, tying symmetry."""

from __future__ import annotations

from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from ecvqe import ansatz, qsim
from ecvqe.ansatz import CircuitSpec
from ecvqe.models import build_translation
from ecvqe.synthesis import entangler, rz, ry


def random_state(n, rng):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def embed_pair(u, q1, q2, L):
    """Dense 2**L operator of ``u`` on qubits (q1, q2) via explicit permutation."""
    full = np.kron(u, np.eye(2 ** (L - 2)))
    order = [q1, q2] + [q for q in range(L) if q not in (q1, q2)]
    inv = np.argsort(order)
    t = full.reshape((2,) * (2 * L))
    t = t.transpose(list(inv) + [L + i for i in inv])
    return t.reshape(2**L, 2**L)


@pytest.mark.parametrize("L", [4, 8, 12])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_parameter_counts(L, N):
    assert ansatz.build_circuit(CircuitSpec(L, N, tying="general")).num_params == 10 * L * N
    assert ansatz.build_circuit(CircuitSpec(L, N, tying="trans_r1")).num_params == 10 * N
    assert ansatz.build_circuit(CircuitSpec(L, N, tying="trans_r2")).num_params == 20 * N


def test_parameter_count_examples():
    assert CircuitSpec(8, 2).num_params == 160
    assert CircuitSpec(8, 3, tying="trans_r1").num_params == 30
    assert CircuitSpec(8, 5, tying="trans_r2").num_params == 100
    assert CircuitSpec(8, 2, layout="full_kak15").num_params == 240
    assert CircuitSpec(8, 2, final_1q_layer=True).num_params == 160 + 24


def test_spec_validation():
    with pytest.raises(ValueError):
        CircuitSpec(5, 1)
    with pytest.raises(ValueError):
        CircuitSpec(4, 0)
    with pytest.raises(ValueError):
        CircuitSpec(4, 1, layout="fancy")
    with pytest.raises(ValueError):
        CircuitSpec(4, 1, tying="r3")


def test_bonds_form_brick_wall():
    s = CircuitSpec(6, 1)
    assert s.bonds(0) == [(0, 1), (2, 3), (4, 5)]
    assert s.bonds(1) == [(1, 2), (3, 4), (5, 0)]


def test_block_matrix_examples():
    assert np.allclose(ansatz.block_matrix("compressed10", np.zeros(10)), np.eye(4))
    theta = np.zeros(10)
    theta[9] = 0.7
    assert np.allclose(ansatz.block_matrix("compressed10", theta), np.exp(-0.7j) * np.eye(4))


def test_block_matrix_structure():
    rng = np.random.default_rng(2)
    t = rng.uniform(-2, 2, 10)
    e1 = rz(t[0]) @ ry(t[1]) @ rz(t[2])
    e2 = rz(t[3]) @ ry(t[4]) @ rz(t[5])
    ref = np.exp(-1j * t[9]) * entangler(*t[6:9]) @ np.kron(e1, e2)
    assert np.allclose(ansatz.block_matrix("compressed10", t), ref)


def test_full_kak_block_is_universal():
    worst = 0.0
    for u in unitary_group.rvs(4, size=200, random_state=np.random.default_rng(3)):
        angles, phase = ansatz.kak_block_angles(u)
        worst = max(worst, np.abs(np.exp(1j * phase) * ansatz.block_matrix("full_kak15", angles) - u).max())
    assert worst < 1e-10


@pytest.mark.parametrize("layout", ["compressed10", "full_kak15"])
@pytest.mark.parametrize("tying", ["general", "trans_r1", "trans_r2"])
def test_circuit_unitary_is_product_of_blocks(layout, tying):
    spec = CircuitSpec(4, 2, layout, tying)
    rng = np.random.default_rng(4)
    theta = rng.uniform(-1, 1, spec.num_params)
    k = spec.block_size
    U = np.eye(16, dtype=complex)
    for layer in range(2):
        for sub in (0, 1):
            for b, (q1, q2) in enumerate(spec.bonds(sub)):
                off = spec.block_offset(layer, sub, b)
                U = embed_pair(ansatz.block_matrix(layout, theta[off : off + k]), q1, q2, 4) @ U
    assert np.abs(ansatz.build_circuit(spec).unitary(theta) - U).max() < 1e-12


@pytest.mark.parametrize("L", [4, 6, 8])
def test_trans_r2_commutes_with_two_site_translation(L):
    spec = CircuitSpec(L, 2, tying="trans_r2", final_1q_layer=True)
    rng = np.random.default_rng(L)
    theta = rng.uniform(-np.pi, np.pi, spec.num_params)
    circ = ansatz.build_circuit(spec)
    T = build_translation(L, 2)
    psi = random_state(L, rng)
    a, _ = qsim.apply_circuit_with_tangents(circ, theta, T.apply(psi), want_tangents=False)
    b, _ = qsim.apply_circuit_with_tangents(circ, theta, psi, want_tangents=False)
    assert np.linalg.norm(a - T.apply(b)) < 1e-10


def test_near_identity_initialisation_is_unitary():
    spec = CircuitSpec(6, 2, tying="trans_r2")
    U = ansatz.build_circuit(spec).unitary(ansatz.initial_params(spec, 0.1))
    assert qsim.is_unitary(U, 1e-10)
    assert np.linalg.norm(U @ qsim.zero_state(6) - qsim.zero_state(6)) > 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["general", "trans_r1", "trans_r2"]), st.integers(1, 3), st.integers(1, 3), st.booleans())
def test_extend_params_keeps_prefix(tying, N, extra, final):
    spec = CircuitSpec(4, N, tying=tying, final_1q_layer=final)
    p = np.arange(spec.num_params, dtype=float)
    grown = ansatz.extend_params(p, spec, extra, 0.01)
    big = spec.with_layers(N + extra)
    assert grown.shape == (big.num_params,)
    cut = N * spec.params_per_layer
    assert np.array_equal(grown[:cut], p[:cut])
    assert np.all(grown[cut : cut + extra * spec.params_per_layer] == 0.01)
    assert np.array_equal(grown[big.N * big.params_per_layer :], p[cut:])


def test_new_identity_layer_preserves_state():
    spec = CircuitSpec(4, 1, tying="trans_r2")
    rng = np.random.default_rng(5)
    theta = rng.uniform(-1, 1, spec.num_params)
    grown = ansatz.extend_params(theta, spec, 1, 0.0)
    a = ansatz.build_circuit(spec).unitary(theta)
    b = ansatz.build_circuit(spec.with_layers(2)).unitary(grown)
    assert np.allclose(a, b)


def test_phase_slots_and_labels():
    spec = CircuitSpec(4, 2)
    assert spec.phase_slots() == [off + 9 for off in range(0, 80, 10)]
    labels = spec.param_labels()
    assert labels[9].endswith("phase") and labels[6].endswith("alpha")
    assert CircuitSpec(4, 1, layout="full_kak15").phase_slots() == []


def test_circuit_json_describes_every_rotation():
    import json

    spec = CircuitSpec(4, 1, tying="trans_r2")
    doc = json.loads(ansatz.build_circuit(spec).to_json())
    assert doc["tying"] == "trans_r2" and len(doc["gates"]) == 4 * 10
    assert max(g["param_index"] for g in doc["gates"]) == spec.num_params - 1
