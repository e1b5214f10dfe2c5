"""Benchmark lattice Hamiltonians and their symmetry operators.

Three models are provided, all as :class:`~ecvqe.pauli.PauliSum`:

* Ising chain with transverse and longitudinal fields (periodic).
* Three-state Potts chain in a field (periodic), each Potts spin stored in the
  symmetric (triplet) subspace of a qubit pair.
* Massive Schwinger model after the Jordan-Wigner/Gauss-law elimination to a
  spin chain (open).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import qsim
from .pauli import PauliSum

OMEGA = np.exp(2j * np.pi / 3)
CLOCK = np.diag([1.0, OMEGA, OMEGA**2])
SHIFT = np.roll(np.eye(3, dtype=complex), 1, axis=0)  # |k> -> |k+1 mod 3>

_S = 1 / np.sqrt(2)
# Potts |0>, |1>, |2> -> |uu>, (|ud> + |du>)/sqrt2, |dd> with up = qubit |0>
TRIPLET_ISOMETRY = np.array(
    [[1, 0, 0], [0, _S, 0], [0, _S, 0], [0, 0, 1]], dtype=complex
)
SINGLET = np.array([0, _S, -_S, 0], dtype=complex)


def embed_potts(op: np.ndarray) -> np.ndarray:
    """``V O V^dag``: a 3x3 Potts operator as a 4x4 qubit-pair operator, zero on the singlet."""
    return TRIPLET_ISOMETRY @ np.asarray(op) @ TRIPLET_ISOMETRY.conj().T


def build_ising(L: int, g: float, h: float) -> PauliSum:
    """``-sum X_j X_{j+1} - g sum Z_j - h sum X_j`` on a ring of ``L`` qubits."""
    if not 2 <= L <= qsim.MAX_QUBITS:
        raise ValueError(f"Ising chain needs 2 <= L <= {qsim.MAX_QUBITS}, got {L}")
    terms = []
    for j in range(L):
        xx = ["I"] * L
        xx[j] = xx[(j + 1) % L] = "X"
        terms.append(("".join(xx), -1.0))
        terms.append(("".join("Z" if k == j else "I" for k in range(L)), -g))
        terms.append(("".join("X" if k == j else "I" for k in range(L)), -h))
    return PauliSum(terms, L)


def _site_op(op3: np.ndarray, site: int, n_qubits: int) -> PauliSum:
    return PauliSum.from_matrix(embed_potts(op3), (2 * site, 2 * site + 1), n_qubits)


def singlet_projector(site: int, n_qubits: int) -> PauliSum:
    """Projector onto the singlet of qubit pair ``site``: ``(I - XX - YY - ZZ) / 4``."""
    return PauliSum.from_matrix(np.outer(SINGLET, SINGLET.conj()), (2 * site, 2 * site + 1), n_qubits)


def build_potts(L_spins: int, g: float, h: float, singlet_penalty: float = 10.0) -> PauliSum:
    """Periodic three-state Potts chain on ``2 * L_spins`` qubits.

    ``-sum_j (sigma_j sigma_{j+1}^dag + g tau_j + h sigma_j + h.c.)`` with
    ``sigma`` the clock matrix and ``tau`` the shift matrix, each embedded in
    the triplet of its qubit pair, plus ``singlet_penalty`` times the number
    of singlet pairs.
    """
    if L_spins < 2:
        raise ValueError("Potts chain needs at least 2 spins")
    n = 2 * L_spins
    if n > qsim.MAX_QUBITS:
        raise ValueError("register too large")
    h_op = PauliSum({}, num_qubits=n)
    for j in range(L_spins):
        bond = _site_op(CLOCK, j, n) @ _site_op(CLOCK.conj().T, (j + 1) % L_spins, n)
        local = g * _site_op(SHIFT, j, n) + h * _site_op(CLOCK, j, n)
        t = bond + local
        h_op = h_op - (t + t.adjoint())
    if singlet_penalty:
        for j in range(L_spins):
            h_op = h_op + singlet_penalty * singlet_projector(j, n)
    return PauliSum(((k, v.real) for k, v in h_op.terms), n)


def clock_model_matrix(L_spins: int, g: float, h: float) -> np.ndarray:
    """The same Potts Hamiltonian written directly on ``3**L_spins`` states."""
    from functools import reduce

    def op(d):
        return reduce(np.kron, [d.get(j, np.eye(3)) for j in range(L_spins)])

    H = np.zeros((3**L_spins,) * 2, dtype=complex)
    for j in range(L_spins):
        t = op({j: CLOCK}) @ op({(j + 1) % L_spins: CLOCK.conj().T}) + g * op({j: SHIFT}) + h * op({j: CLOCK})
        H -= t + t.conj().T
    return H


def schwinger_projector(j: int, L: int) -> PauliSum:
    """``P_j = (1 + (-1)^j Z_j) / 2`` with sites counted from 1."""
    return 0.5 * (PauliSum.identity(L) + (-1) ** j * PauliSum.term(L, {j - 1: "Z"}))


def build_schwinger(L: int, m: float, g: float) -> PauliSum:
    """Open-boundary massive Schwinger model on ``L`` qubits.

    ``1/2 sum (X_j X_{j+1} + Y_j Y_{j+1}) + m sum P_j + g^2/2 sum_j E_j^2`` with
    ``E_j = sum_{k<=j} (-1)^k P_k``. The square is expanded with the Pauli
    product table, which is exactly ``P_k^2 = P_k`` for these projectors.
    """
    if not 2 <= L <= qsim.MAX_QUBITS:
        raise ValueError(f"Schwinger chain needs 2 <= L <= {qsim.MAX_QUBITS}, got {L}")
    H = PauliSum({}, num_qubits=L)
    for j in range(L - 1):
        H = H + 0.5 * (PauliSum.term(L, {j: "X", j + 1: "X"}) + PauliSum.term(L, {j: "Y", j + 1: "Y"}))
    for j in range(1, L + 1):
        H = H + m * schwinger_projector(j, L)
    field_op = PauliSum({}, num_qubits=L)
    for j in range(1, L):
        field_op = field_op + (-1) ** j * schwinger_projector(j, L)
        H = H + (g**2 / 2) * (field_op @ field_op)
    return PauliSum(((k, v.real) for k, v in H.terms), L)


def u1_charge(L: int) -> PauliSum:
    """``Q = sum_j Z_j``."""
    return PauliSum([("".join("Z" if k == j else "I" for k in range(L)), 1.0) for j in range(L)], L)


class SymmetryOp:
    """A unitary symmetry with a matrix-free action on states."""

    kind = "symmetry"
    hermitian = False

    def apply(self, state: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply_adjoint(self, state: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def expectation(self, state: np.ndarray) -> complex:
        return complex(np.vdot(state, self.apply(state)))

    def apply_hermitian_part(self, state: np.ndarray) -> np.ndarray:
        """``(S + S^dag)/2 |psi>``."""
        if self.hermitian:
            return self.apply(state)
        return 0.5 * (self.apply(state) + self.apply_adjoint(state))


@dataclass(frozen=True)
class Translation(SymmetryOp):
    """Cyclic shift moving qubit ``q`` to qubit ``(q + shift) mod L``."""

    num_qubits: int
    shift: int = 1
    kind = "translation"

    def __post_init__(self):
        if self.shift <= 0:
            raise ValueError("translation shift must be positive")

    def _perm(self, shift):
        L = self.num_qubits
        return [(k - shift) % L for k in range(L)]

    def _roll(self, state, shift):
        state = np.asarray(state)
        L = self.num_qubits
        lead = state.shape[:-1]
        t = state.reshape(lead + (2,) * L)
        axes = list(range(len(lead))) + [len(lead) + p for p in self._perm(shift)]
        return np.transpose(t, axes).reshape(state.shape)

    def apply(self, state):
        return self._roll(state, self.shift)

    def apply_adjoint(self, state):
        return self._roll(state, -self.shift % self.num_qubits)

    def period(self) -> int:
        return self.num_qubits // math.gcd(self.num_qubits, self.shift)


def potts_charge_local() -> np.ndarray:
    """Two-qubit charge conjugation: fixes Potts |0>, swaps |1> <-> |2>, identity on the singlet."""
    swap12 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    return embed_potts(swap12) + np.outer(SINGLET, SINGLET.conj())


@dataclass(frozen=True)
class PottsCharge(SymmetryOp):
    """Z2 charge ``C``: the product of :func:`potts_charge_local` over all Potts sites."""

    L_spins: int
    kind = "potts_charge"
    hermitian = True

    def apply(self, state):
        if np.asarray(state).shape[-1] != 4**self.L_spins:
            raise ValueError("Potts charge needs a register of 2 * L_spins qubits")
        local = potts_charge_local()
        for j in range(self.L_spins):
            state = qsim.apply_matrix(state, local, (2 * j, 2 * j + 1))
        return state

    apply_adjoint = apply


@dataclass(frozen=True)
class U1Charge(SymmetryOp):
    """``Q = sum Z_j``; Hermitian but not unitary, used for labelling only."""

    num_qubits: int
    kind = "u1_charge"
    hermitian = True

    def pauli(self) -> PauliSum:
        return u1_charge(self.num_qubits)

    def apply(self, state):
        return self.pauli().apply(state)

    apply_adjoint = apply


def build_translation(L: int, shift: int = 1) -> Translation:
    return Translation(L, shift)


def build_potts_charge(L_spins: int) -> PottsCharge:
    return PottsCharge(L_spins)


def potts_basis_state(labels) -> np.ndarray:
    """Product state with Potts spin ``j`` in triplet state ``labels[j]``."""
    psi = np.array([1.0 + 0j])
    for k in labels:
        psi = np.kron(psi, TRIPLET_ISOMETRY[:, k])
    return psi


def domain_wall_count(state: np.ndarray, L_spins: int) -> float:
    """Mean number of neighbouring Potts pairs (periodic) with unequal labels."""
    state = np.asarray(state)
    if state.shape[-1] != 4**L_spins:
        raise ValueError("domain-wall count needs a register of 2 * L_spins qubits")
    proj = [np.outer(TRIPLET_ISOMETRY[:, k], TRIPLET_ISOMETRY[:, k].conj()) for k in range(3)]
    total = 0.0
    for j in range(L_spins):
        k = (j + 1) % L_spins
        same = 0.0
        for p in proj:
            v = qsim.apply_matrix(qsim.apply_matrix(state, p, (2 * j, 2 * j + 1)), p, (2 * k, 2 * k + 1))
            same += np.vdot(v, v).real
        total += 1.0 - same
    return float(total)


@dataclass(frozen=True)
class ModelSpec:
    """One benchmark instance: model kind, couplings and register size.

    ``L`` is always the number of qubits; Potts uses ``L // 2`` spins.
    """

    kind: str
    L: int
    couplings: Mapping[str, float] = field(default_factory=dict)

    REQUIRED = {"ising": ("g", "h"), "potts": ("g", "h"), "schwinger": ("m", "g")}

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in self.REQUIRED:
            raise ValueError(f"unknown model kind {self.kind!r}")
        missing = [k for k in self.REQUIRED[kind] if k not in self.couplings]
        if missing:
            raise ValueError(f"{kind} model is missing couplings {missing}")
        if kind == "potts" and self.L % 2:
            raise ValueError("Potts model needs an even number of qubits")
        object.__setattr__(self, "couplings", dict(self.couplings))

    @property
    def boundary(self) -> str:
        return "open" if self.kind == "schwinger" else "periodic"

    @property
    def L_spins(self) -> int:
        return self.L // 2 if self.kind == "potts" else self.L

    def hamiltonian(self) -> PauliSum:
        c = self.couplings
        if self.kind == "ising":
            return build_ising(self.L, c["g"], c["h"])
        if self.kind == "potts":
            return build_potts(self.L // 2, c["g"], c["h"], c.get("singlet_penalty", 10.0))
        return build_schwinger(self.L, c["m"], c["g"])

    def translation(self) -> Translation | None:
        """Translation by one lattice site (two qubits for Potts); None for open chains."""
        if self.kind == "ising":
            return Translation(self.L, 1)
        if self.kind == "potts":
            return Translation(self.L, 2)
        return None

    def charge(self) -> SymmetryOp | None:
        if self.kind == "potts":
            return PottsCharge(self.L // 2)
        if self.kind == "schwinger":
            return U1Charge(self.L)
        return None
