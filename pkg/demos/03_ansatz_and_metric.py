"""The Euler-Cartan brick wall, parameter tying and the Fubini-Study metric."""

import numpy as np

from ecvqe import ansatz, objective, qng, qsim
from ecvqe.ansatz import CircuitSpec
from ecvqe.models import ModelSpec, build_translation

# %% Parameter counts for the three tying modes.
for tying in ("general", "trans_r1", "trans_r2"):
    spec = CircuitSpec(L=8, N=2, tying=tying)
    print(f"{tying:9s} L=8 N=2 -> {spec.num_params} parameters")

# %% Each block: ZYZ on both wires, the three-angle entangler, a global-phase slot.
spec = CircuitSpec(L=6, N=2, tying="trans_r2")
print(spec.param_labels()[:10])

# trans_r2 circuits commute with translation by two sites
rng = np.random.default_rng(1)
theta = rng.uniform(-np.pi, np.pi, spec.num_params)
circ = ansatz.build_circuit(spec)
T2 = build_translation(6, 2)
psi = rng.standard_normal(64) + 1j * rng.standard_normal(64)
psi /= np.linalg.norm(psi)
a, _ = qsim.apply_circuit_with_tangents(circ, theta, T2.apply(psi), want_tangents=False)
b, _ = qsim.apply_circuit_with_tangents(circ, theta, psi, want_tangents=False)
print("|| U T2 psi - T2 U psi || =", np.linalg.norm(a - T2.apply(b)))

# %% Exact gradient and metric from one tangent pass.
model = ModelSpec("ising", 6, {"g": 1.0, "h": 0.156})
cost = objective.CostSpec(model.hamiltonian(), translation=(model.translation(), 1, 1.0))
cg = objective.gradient(cost, circ, theta, qsim.zero_state(6))
metric = qng.fubini_study_metric(cg.state, cg.tangents)
w = np.linalg.eigvalsh(metric)
print("cost:", cg.value)
print("metric eigenvalues: min %.2e, max %.2f" % (w[0], w[-1]))
print("phase-slot gradient entries:", np.abs(cg.gradient[spec.phase_slots()]).max())
print("metric null directions:", int(np.sum(w < 1e-10)), "(the", len(spec.phase_slots()), "phase slots plus redundant angles)")

# %% One natural-gradient step.
new = qng.qng_step(theta, cg.gradient, metric, lr=0.04, eps=1e-4)
psi_new, _ = qsim.apply_circuit_with_tangents(circ, new, qsim.zero_state(6), want_tangents=False)
print("cost after one QNG step:", objective.evaluate(cost, psi_new))
