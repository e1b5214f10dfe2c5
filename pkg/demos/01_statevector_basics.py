"""Statevectors, Pauli sums and exact tangent states."""

import numpy as np

from ecvqe import qsim
from ecvqe.models import build_ising
from ecvqe.pauli import PAULI_MATRICES, PauliSum

# %% Registers are plain numpy arrays; qubit 0 is the most significant bit.
psi = qsim.zero_state(3)
psi = qsim.apply_gate(psi, qsim.Gate((0,), PAULI_MATRICES["X"]))
print("X on qubit 0 of |000>:", np.flatnonzero(psi), "-> index 4 = |100>")

# %% Hamiltonians are canonical Pauli sums.
H = build_ising(4, g=1.0, h=0.156)
print(H)
print("<0000|H|0000> =", qsim.expectation(qsim.zero_state(4), H), "(only the -g Z terms survive)")

# products and commutators use the Pauli multiplication table
x, y = PauliSum.term(1, {0: "X"}), PauliSum.term(1, {0: "Y"})
print("X @ Y =", x @ y)
print("[X, Y] =", x.commutator(y))

# %% Rotations follow R_a(t) = exp(-i t a), with no factor 1/2.
circ = qsim.Circuit(1, [qsim.Rotation((0,), PAULI_MATRICES["Y"], 0)], num_params=1)
state, tangents = qsim.apply_circuit_with_tangents(circ, [np.pi / 8], qsim.zero_state(1))
print("Ry(pi/8)|0> =", np.round(state, 6))
print("d/dtheta    =", np.round(tangents[0], 6))

# check the tangent against a central difference
d = 1e-6
plus, _ = qsim.apply_circuit_with_tangents(circ, [np.pi / 8 + d], qsim.zero_state(1), want_tangents=False)
minus, _ = qsim.apply_circuit_with_tangents(circ, [np.pi / 8 - d], qsim.zero_state(1), want_tangents=False)
print("finite-difference error:", np.abs((plus - minus) / (2 * d) - tangents[0]).max())
