"""Euler-Cartan variational eigensolver with quantum natural gradient.

A classical statevector implementation of a brick-wall VQE built from KAK
two-qubit blocks, trained by quantum natural gradient, with excited states by
orthogonality penalties and exact diagonalisation as the reference oracle.

Modules:
    qsim: statevectors, gates, circuits and exact tangent states.
    pauli: Pauli-sum operators.
    models: Ising, Potts and Schwinger Hamiltonians plus symmetry operators.
    synthesis: Euler and KAK decompositions, entangler netlist.
    ansatz: Euler-Cartan brick-wall circuits and parameter tying.
    objective: penalised cost function and its gradient.
    qng: Fubini-Study metric and the natural-gradient step.
    driver: fixed-depth optimisation, layer growth, spectrum sweeps.
    ed: dense and Lanczos exact spectra with sector labels.
    io, cli: configuration files, run records, command line.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .ansatz import CircuitSpec, build_circuit, initial_params
from .driver import EigenResult, RunConfig, grow_layers, optimize_fixed_depth, solve_spectrum
from .ed import SpectrumReport, classify_sectors, dense_spectrum, iterative_extremal
from .models import ModelSpec
from .pauli import PauliSum
from .synthesis import entangler, kak_decompose

__all__ = [
    "CircuitSpec",
    "EigenResult",
    "ModelSpec",
    "PauliSum",
    "RunConfig",
    "SpectrumReport",
    "build_circuit",
    "classify_sectors",
    "dense_spectrum",
    "entangler",
    "grow_layers",
    "initial_params",
    "iterative_extremal",
    "kak_decompose",
    "optimize_fixed_depth",
    "solve_spectrum",
    "__version__",
]
