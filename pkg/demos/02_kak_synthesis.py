"""Two-qubit synthesis: KAK decomposition and the three-CNOT entangler."""

import numpy as np
from scipy.stats import unitary_group

from ecvqe import synthesis as syn

# %% Any two-qubit unitary is local gates around exp(-i(a XX + b YY + c ZZ)).
u = unitary_group.rvs(4, random_state=np.random.default_rng(0))
k = syn.kak_decompose(u)
print("interaction coefficients (Weyl chamber):", np.round(k.interaction_coefficients, 6))
print("recomposition error:", np.abs(k.matrix() - u).max())

# well-known gates land on well-known points
cnot = syn.kak_decompose(syn.CNOT_01).interaction_coefficients
swap = syn.kak_decompose(np.eye(4)[[0, 2, 1, 3]]).interaction_coefficients
print("CNOT ->", np.round(cnot, 6), " SWAP ->", np.round(swap, 6))

# %% Single-qubit factors as Z-Y-Z Euler angles.
e = syn.euler_decompose(k.A1)
print(f"A1 = e^(i {e.phase:.4f}) Rz({e.a:.4f}) Ry({e.b:.4f}) Rz({e.c:.4f})")

# %% The entangler compiles to exactly three CNOTs and five rotations.
gates = syn.entangler_netlist(*k.interaction_coefficients)
for g in gates:
    kind = "CNOT" if g.matrix.shape == (4, 4) else "1q rotation"
    print(f"  {kind:12s} on qubits {g.qubits}")
v = syn.netlist_unitary(gates)
target = syn.entangler(*k.interaction_coefficients)
phase = target[0, 0] / v[0, 0]
print("netlist error up to global phase:", np.abs(phase * v - target).max())
