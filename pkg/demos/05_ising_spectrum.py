"""Ising excited states in the T=+1 sector and the meson mass ratio.

Runs the bundled sweep (8 states, a few minutes on one core) and compares
against the sector-classified exact spectrum.
"""

from ecvqe import ed, io
from ecvqe.models import ModelSpec

model = ModelSpec("ising", 8, {"g": 1.0, "h": 0.156})
rep = ed.classify_sectors(ed.dense_spectrum(model.hamiltonian(), 60), ed.model_symmetries(model))
print("global index of the 7th T=+1 excitation:", rep.sector_indices(T=0)[7])

rec = io.run(io.load_config("ising_L8_spectrum"), outdir="demo_runs")
print(f"{'n':>2} {'VQE':>11} {'exact':>11} {'rel err':>9} {'N':>3}")
for st in rec.summary["states"]:
    print(f"{st['state']:2d} {st['energy']:11.6f} {st['reference']:11.6f} {st['rel_error']:9.2e} {st['N']:3d}")

e = [st["energy"] for st in rec.summary["states"]]
x = rep.sector_energies(T=0)
print("mass ratio (E2-E0)/(E1-E0): VQE %.4f, exact %.4f" % ((e[2] - e[0]) / (e[1] - e[0]), (x[2] - x[0]) / (x[1] - x[0])))
print("plot data:", rec.plot_path)
