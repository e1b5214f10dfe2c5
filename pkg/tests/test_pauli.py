"""Pauli-sum algebra checked against dense Kronecker products."""

from __future__ import annotations

from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecvqe.pauli import PAULI_MATRICES, PauliSum


def kron_label(label: str) -> np.ndarray:
    return reduce(np.kron, [PAULI_MATRICES[c] for c in label])


def dense_oracle(terms) -> np.ndarray:
    return sum(c * kron_label(lab) for lab, c in terms)


labels = st.integers(1, 4).flatmap(lambda L: st.lists(st.text("IXYZ", min_size=L, max_size=L), min_size=1, max_size=6))
coeffs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@st.composite
def pauli_pairs(draw):
    labs = draw(labels)
    L = len(labs[0])
    a = [(lab, draw(coeffs)) for lab in labs]
    b = [(draw(st.text("IXYZ", min_size=L, max_size=L)), draw(coeffs)) for _ in range(draw(st.integers(1, 5)))]
    return L, a, b


@settings(max_examples=80, deadline=None)
@given(pauli_pairs())
def test_algebra_matches_dense(pair):
    L, a, b = pair
    A, B = PauliSum(a, L), PauliSum(b, L)
    Da, Db = dense_oracle(a), dense_oracle(b)
    assert np.allclose(A.to_dense(), Da, atol=1e-12)
    assert np.allclose((A + B).to_dense(), Da + Db, atol=1e-12)
    assert np.allclose((A @ B).to_dense(), Da @ Db, atol=1e-10)
    assert np.allclose(A.commutator(B).to_dense(), Da @ Db - Db @ Da, atol=1e-10)
    assert np.allclose(A.adjoint().to_dense(), Da.conj().T, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(pauli_pairs(), st.integers(0, 2**31))
def test_apply_matches_dense(pair, seed):
    L, a, _ = pair
    v = np.random.default_rng(seed).standard_normal((3, 2**L)).astype(complex)
    A = PauliSum(a, L)
    assert np.allclose(A.apply(v), v @ dense_oracle(a).T, atol=1e-10)


def test_canonicalisation_merges_and_drops():
    s = PauliSum([("XI", 1.0), ("IZ", 2.0), ("XI", -1.0), ("IZ", 1e-16)], 2)
    assert s.terms == (("IZ", 2.0),)
    assert [lab for lab, _ in PauliSum([("ZI", 1), ("IX", 1), ("XI", 1)], 2).terms] == ["IX", "XI", "ZI"]


def test_hermiticity_flag():
    assert PauliSum([("XY", 0.5)], 2).is_hermitian()
    assert not PauliSum([("XY", 0.5j)], 2).is_hermitian()


def test_pauli_products():
    x, y, z = (PauliSum.term(1, {0: p}) for p in "XYZ")
    assert (x @ y).isclose(1j * z)
    assert (y @ x).isclose(-1j * z)
    assert (z @ z).isclose(PauliSum.identity(1))


def test_from_matrix_roundtrip():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    s = PauliSum.from_matrix(m, (2, 0), 3)
    ref = np.zeros((8, 8), dtype=complex)
    for col in range(8):
        b = [(col >> (2 - q)) & 1 for q in range(3)]
        for out in range(4):
            nb = list(b)
            nb[2], nb[0] = out >> 1, out & 1
            ref[nb[0] * 4 + nb[1] * 2 + nb[2], col] += m[out, b[2] * 2 + b[0]]
    assert np.allclose(s.to_dense(), ref)


def test_json_roundtrip():
    s = PauliSum([("XZ", 0.25), ("YY", -1.5 + 0.5j), ("II", 3.0)], 2)
    assert PauliSum.from_json(s.to_json()) == s


def test_mismatched_sizes_rejected():
    with pytest.raises(ValueError):
        PauliSum.term(2, {0: "X"}) + PauliSum.term(3, {0: "X"})
    with pytest.raises(ValueError):
        PauliSum([("XQ", 1.0)], 2)
