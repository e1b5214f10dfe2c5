"""Potts chain: triplet encoding, charge sector, and the false vacuum."""

import numpy as np

from ecvqe import io
from ecvqe.models import ModelSpec, domain_wall_count, potts_basis_state

model = ModelSpec("potts", 8, {"g": 0.1, "h": 0.1})
H = model.hamiltonian()

# %% Classical product states: the field h splits the three ordered vacua.
for labels in ([0, 0, 0, 0], [1, 1, 1, 1], [0, 0, 1, 1]):
    psi = potts_basis_state(labels)
    e = np.vdot(psi, H.apply(psi)).real
    print(f"{labels}: energy {e:7.3f}, domain walls {domain_wall_count(psi, 4):.0f}")

# %% Eight lowest states of the (T=+1, C=+1) sector.
rec = io.run(io.load_config("potts_L4_spectrum"), outdir="demo_runs")
for st in rec.summary["states"]:
    walls = st["labels"]["domain_walls"]
    print(f"{st['state']:2d} E={st['energy']:9.5f} exact={st['reference']:9.5f} rel={st['rel_error']:.1e} walls={walls:.2f}")
print("the first excited state has no domain walls: it is a false vacuum")
