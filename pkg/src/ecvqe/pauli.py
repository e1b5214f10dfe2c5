"""Weighted Pauli strings.

A :class:`PauliSum` is an immutable, canonical map from label strings such as
``"XZIY"`` (character ``q`` acts on qubit ``q``) to complex coefficients.
Identity-only labels are kept as explicit constant offsets.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

ZERO_TOL = 1e-14

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase, label) with a @ b = phase * label
_PRODUCT = {}
for _a, _ma in PAULI_MATRICES.items():
    for _b, _mb in PAULI_MATRICES.items():
        _m = _ma @ _mb
        for _c, _mc in PAULI_MATRICES.items():
            _ph = np.trace(_mc.conj().T @ _m) / 2
            if abs(abs(_ph) - 1) < 1e-12:
                _PRODUCT[_a, _b] = (complex(np.round(_ph)), _c)


def _masks(label: str) -> tuple[int, int, int]:
    """Bit masks (x, z) and Y count, with qubit 0 as the most significant bit."""
    L = len(label)
    x = z = 0
    for q, c in enumerate(label):
        bit = 1 << (L - 1 - q)
        if c in "XY":
            x |= bit
        if c in "ZY":
            z |= bit
    return x, z, label.count("Y")


def _parity(values: np.ndarray) -> np.ndarray:
    v = values.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out


class PauliSum:
    """Canonical sum of Pauli strings.

    Terms are sorted by label, like terms are merged and coefficients with
    modulus below ``1e-14`` are dropped.
    """

    def __init__(self, terms: Mapping[str, complex] | Iterable[tuple[str, complex]] = (), num_qubits: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[str, complex] = {}
        for label, coeff in items:
            label = label.upper()
            if set(label) - set("IXYZ"):
                raise ValueError(f"invalid Pauli label {label!r}")
            if num_qubits is None:
                num_qubits = len(label)
            if len(label) != num_qubits:
                raise ValueError(f"label {label!r} does not have length {num_qubits}")
            acc[label] = acc.get(label, 0.0) + complex(coeff)
        if num_qubits is None:
            raise ValueError("empty PauliSum needs an explicit num_qubits")
        self.num_qubits = int(num_qubits)
        # written so that non-finite coefficients survive and surface downstream
        self._terms = tuple(sorted((k, v) for k, v in acc.items() if not abs(v) <= ZERO_TOL))

    @classmethod
    def term(cls, num_qubits: int, ops: Mapping[int, str], coeff: complex = 1.0) -> PauliSum:
        """Single term from a sparse ``{qubit: 'X'|'Y'|'Z'}`` description."""
        label = ["I"] * num_qubits
        for q, p in ops.items():
            if not 0 <= q < num_qubits:
                raise ValueError(f"qubit {q} outside register of {num_qubits}")
            if label[q] != "I":
                raise ValueError(f"qubit {q} given twice")
            label[q] = p
        return cls({"".join(label): coeff})

    @classmethod
    def identity(cls, num_qubits: int, coeff: complex = 1.0) -> PauliSum:
        return cls({"I" * num_qubits: coeff})

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, qubits: tuple[int, ...], num_qubits: int) -> PauliSum:
        """Pauli expansion of a small operator acting on ``qubits``."""
        k = len(qubits)
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2**k, 2**k):
            raise ValueError("matrix size does not match qubits")
        out = {}
        for labels in np.ndindex(*(4,) * k):
            local = "".join("IXYZ"[i] for i in labels)
            p = PAULI_MATRICES[local[0]]
            for c in local[1:]:
                p = np.kron(p, PAULI_MATRICES[c])
            coeff = np.trace(p @ m) / 2**k
            if abs(coeff) > ZERO_TOL:
                full = ["I"] * num_qubits
                for q, c in zip(qubits, local):
                    full[q] = c
                out["".join(full)] = coeff
        return cls(out, num_qubits=num_qubits)

    @property
    def terms(self) -> tuple[tuple[str, complex], ...]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, label: str) -> complex:
        return dict(self._terms).get(label.upper(), 0.0)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})*{lab}" for lab, c in self._terms[:6])
        more = f" + ... ({len(self)} terms)" if len(self) > 6 else ""
        return f"PauliSum({body or '0'}{more})"

    def _check(self, other: PauliSum):
        if other.num_qubits != self.num_qubits:
            raise ValueError("qubit count mismatch")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = PauliSum.identity(self.num_qubits, other)
        self._check(other)
        return PauliSum(self._terms + other._terms, self.num_qubits)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, PauliSum):
            return self @ scalar
        return PauliSum(((k, v * scalar) for k, v in self._terms), self.num_qubits)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __matmul__(self, other: PauliSum) -> PauliSum:
        """Operator product, evaluated with the single-qubit Pauli table."""
        self._check(other)
        out: dict[str, complex] = {}
        for la, ca in self._terms:
            for lb, cb in other._terms:
                phase = 1.0 + 0j
                chars = []
                for a, b in zip(la, lb):
                    ph, c = _PRODUCT[a, b]
                    phase *= ph
                    chars.append(c)
                key = "".join(chars)
                out[key] = out.get(key, 0.0) + phase * ca * cb
        return PauliSum(out, self.num_qubits)

    def __pow__(self, n: int) -> PauliSum:
        out = PauliSum.identity(self.num_qubits)
        for _ in range(n):
            out = out @ self
        return out

    def commutator(self, other: PauliSum) -> PauliSum:
        return self @ other - other @ self

    def adjoint(self) -> PauliSum:
        return PauliSum(((k, np.conj(v)) for k, v in self._terms), self.num_qubits)

    def is_hermitian(self, atol: float = ZERO_TOL) -> bool:
        return all(abs(v.imag) <= atol for _, v in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (self - other).terms == ()

    def isclose(self, other: PauliSum, atol: float = 1e-12) -> bool:
        return all(abs(v) <= atol for _, v in (self - other).terms)

    def norm_bound(self) -> float:
        """Upper bound on the spectral radius: sum of coefficient moduli."""
        return float(sum(abs(v) for _, v in self._terms))

    @cached_property
    def _compiled(self):
        if not self._terms:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex)
        xs, zs, coeffs = [], [], []
        for label, c in self._terms:
            x, z, ny = _masks(label)
            xs.append(x)
            zs.append(z)
            coeffs.append(c * 1j**ny)
        return np.array(xs, dtype=np.int64), np.array(zs, dtype=np.int64), np.array(coeffs)

    @cached_property
    def _sparse(self) -> sp.csr_matrix:
        dim = 2**self.num_qubits
        xs, zs, coeffs = self._compiled
        basis = np.arange(dim, dtype=np.int64)
        rows, cols, vals = [], [], []
        for x, z, c in zip(xs, zs, coeffs):
            sign = 1 - 2 * _parity(basis & z)
            rows.append(basis ^ x)
            cols.append(basis)
            vals.append(c * sign)
        if not rows:
            return sp.csr_matrix((dim, dim), dtype=complex)
        m = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )
        return m.tocsr()

    def to_sparse(self) -> sp.csr_matrix:
        """CSR matrix in the computational basis (qubit 0 = most significant bit)."""
        return self._sparse

    def to_dense(self) -> np.ndarray:
        return self._sparse.toarray()

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Matrix-free ``O|psi>``; a batch ``(B, 2**L)`` is accepted."""
        state = np.asarray(state)
        if state.shape[-1] != 2**self.num_qubits:
            raise ValueError("qubit count mismatch between state and PauliSum")
        if self.num_qubits <= 20:
            return np.asarray(self._sparse @ state.T).T
        # large registers: stream the terms instead of storing the matrix
        dim = 2**self.num_qubits
        basis = np.arange(dim, dtype=np.int64)
        out = np.zeros_like(state, dtype=complex)
        for x, z, c in zip(*self._compiled):
            sign = 1 - 2 * _parity(basis & z)
            out[..., basis ^ x] += c * sign * state
        return out

    def to_json(self) -> str:
        return json.dumps(
            [{"coeff_re": float(v.real), "coeff_im": float(v.imag), "label_string": k} for k, v in self._terms]
        )

    @classmethod
    def from_json(cls, text: str, num_qubits: int | None = None) -> PauliSum:
        rows = json.loads(text)
        if not rows and num_qubits is None:
            raise ValueError("empty PauliSum JSON needs num_qubits")
        return cls(
            ((r["label_string"], complex(r["coeff_re"], r["coeff_im"])) for r in rows),
            num_qubits=num_qubits,
        )
