"""Cost functions for ground and excited states, with exact gradients.

Every cost here is a quadratic form ``<psi|K|psi>`` of one Hermitian
operator

    K = H + sum_m lam_m |psi_m><psi_m|  -+  mu (T + T^dag)/2  -  mu_C C

so the gradient is ``2 Re <d psi|K psi>`` for every term at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .models import SymmetryOp
from .pauli import PauliSum
from .qsim import Circuit, apply_circuit_with_tangents


@dataclass(frozen=True)
class CostSpec:
    """Hamiltonian plus optional orthogonality and symmetry penalties.

    Attributes:
        hamiltonian: Target Hamiltonian.
        orthogonal_states: ``(state, weight)`` pairs to stay orthogonal to.
        translation: ``(T, sign, mu)``; ``sign=+1`` favours the ``+1``
            eigenspace of ``T`` by adding ``-mu Re<T>``.
        charge: ``(C, mu_C)``; adds ``-mu_C <C>``.
    """

    hamiltonian: PauliSum
    orthogonal_states: tuple[tuple[np.ndarray, float], ...] = field(default=())
    translation: tuple[SymmetryOp, int, float] | None = None
    charge: tuple[SymmetryOp, float] | None = None

    def __post_init__(self):
        states = []
        for psi, lam in self.orthogonal_states:
            if lam <= 0:
                raise ValueError("orthogonality weights must be positive")
            psi = np.asarray(psi, dtype=complex)
            if psi.shape != (2**self.hamiltonian.num_qubits,):
                raise ValueError("orthogonal state size does not match Hamiltonian")
            states.append((psi / np.linalg.norm(psi), float(lam)))
        object.__setattr__(self, "orthogonal_states", tuple(states))
        if self.translation is not None:
            op, sign, mu = self.translation
            if sign not in (1, -1) or mu <= 0:
                raise ValueError("translation penalty needs sign +-1 and mu > 0")
        if self.charge is not None and self.charge[1] <= 0:
            raise ValueError("charge penalty needs mu_C > 0")

    @property
    def num_qubits(self) -> int:
        return self.hamiltonian.num_qubits

    def with_orthogonal(self, state: np.ndarray, weight: float) -> CostSpec:
        return CostSpec(
            self.hamiltonian,
            self.orthogonal_states + ((state, weight),),
            self.translation,
            self.charge,
        )

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``K |psi>``."""
        out = self.hamiltonian.apply(psi)
        for phi, lam in self.orthogonal_states:
            out = out + lam * np.vdot(phi, psi) * phi
        if self.translation is not None:
            op, sign, mu = self.translation
            out = out - sign * mu * op.apply_hermitian_part(psi)
        if self.charge is not None:
            op, mu_c = self.charge
            out = out - mu_c * op.apply(psi)
        return out


def _check(cost: CostSpec, state: np.ndarray):
    if np.asarray(state).shape != (2**cost.num_qubits,):
        raise ValueError("state size does not match cost")


def evaluate(cost: CostSpec, state: np.ndarray) -> float:
    """Total cost of a normalised state."""
    _check(cost, state)
    return float(np.vdot(state, cost.apply(state)).real)


def breakdown(cost: CostSpec, state: np.ndarray) -> dict[str, float]:
    """Energy and each penalty term separately."""
    _check(cost, state)
    out = {"energy": float(np.vdot(state, cost.hamiltonian.apply(state)).real)}
    out["overlap"] = float(sum(lam * abs(np.vdot(phi, state)) ** 2 for phi, lam in cost.orthogonal_states))
    if cost.translation is not None:
        op, sign, mu = cost.translation
        out["translation"] = float(-sign * mu * op.expectation(state).real)
    if cost.charge is not None:
        op, mu_c = cost.charge
        out["charge"] = float(-mu_c * op.expectation(state).real)
    return out


@dataclass
class CostGradient:
    value: float
    gradient: np.ndarray
    state: np.ndarray
    tangents: np.ndarray


def gradient(cost: CostSpec, circuit: Circuit, params: Sequence[float], initial_state: np.ndarray) -> CostGradient:
    """Cost, exact gradient, final state and tangent states of a circuit."""
    psi, tangents = apply_circuit_with_tangents(circuit, params, initial_state, want_tangents=True)
    k_psi = cost.apply(psi)
    value = float(np.vdot(psi, k_psi).real)
    grad = 2.0 * (tangents.conj() @ k_psi).real
    return CostGradient(value, grad, psi, tangents)
