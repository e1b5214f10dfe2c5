"""Exact reference spectra and symmetry-sector bookkeeping.

Two eigensolvers back the whole package:

* :func:`dense_spectrum` builds the ``2**L`` matrix and calls ``numpy.linalg.eigh``
  (registers up to 12 qubits).
* :func:`iterative_extremal` wraps a matrix-free :class:`PauliSum` action in a
  ``scipy`` ``LinearOperator`` and runs Lanczos (``eigsh``) for the lowest few
  eigenpairs, optionally inside a symmetry sector (registers up to 22 qubits).

:func:`classify_sectors` labels eigenvectors by translation phase, charge and
U(1) charge.  Degenerate clusters are rotated so that each reported vector is
a simultaneous eigenvector of the symmetry operators.

Example:
    >>> from ecvqe.models import ModelSpec
    >>> model = ModelSpec("ising", 8, {"g": 1.0, "h": 0.156})
    >>> rep = classify_sectors(dense_spectrum(model.hamiltonian(), 60), model_symmetries(model))
    >>> rep.sector_indices(T=0)[7]
    48
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from .models import ModelSpec, PottsCharge, SymmetryOp, Translation, U1Charge
from .pauli import PauliSum

DENSE_MAX_QUBITS = 12
ITERATIVE_MAX_QUBITS = 22
DEGENERACY_TOL = 1e-8
LABEL_TOL = 1e-6
DENSE_RESIDUAL = 1e-8
ITERATIVE_RESIDUAL = 1e-6


class ConvergenceError(ArithmeticError):
    """Raised when the Lanczos iteration stops short; carries what it found."""

    def __init__(self, message: str, eigenvalues: np.ndarray):
        super().__init__(message)
        self.eigenvalues = eigenvalues


@dataclass
class SpectrumReport:
    """Lowest eigenpairs of a Hamiltonian together with optional sector labels.

    Attributes:
        eigenvalues: Ascending eigenvalues.
        eigenvectors: Matrix whose columns are the eigenvectors, or None.
        residuals: ``||H v - E v||`` per pair.
        method: ``"dense"`` or ``"iterative"``.
        labels: One dict per state mapping symmetry name to its label.  Translation
            labels are the integer momentum ``m`` of the eigenphase
            ``exp(2 pi i m / period)`` (``m = 0`` is the ``T = +1`` sector); charge
            labels are the rounded eigenvalue.
        raw_labels: Unrounded expectation values behind ``labels``.
        clusters: Index lists of degenerate eigenvalues (tolerance 1e-8).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray
    method: str
    labels: list[dict] = field(default_factory=list)
    raw_labels: list[dict] = field(default_factory=list)
    clusters: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def sector_indices(self, **sector) -> list[int]:
        """Global indices of the states whose labels match every given value.

        ``report.sector_indices(T=0, C=1)[n]`` is the global position of the
        n-th excited state of the ``(T=+1, C=+1)`` sector.
        """
        if not self.labels:
            raise ValueError("report has no sector labels; run classify_sectors first")
        return [i for i, lab in enumerate(self.labels) if all(lab.get(k) == v for k, v in sector.items())]

    def sector_energies(self, **sector) -> np.ndarray:
        return self.eigenvalues[self.sector_indices(**sector)]

    def to_dict(self, include_vectors: bool = False) -> dict:
        out = {
            "method": self.method,
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "clusters": [list(map(int, c)) for c in self.clusters if len(c) > 1],
            "labels": [dict(lab) for lab in self.labels],
        }
        if self.raw_labels:
            out["raw_labels"] = [
                {k: [float(np.real(v)), float(np.imag(v))] for k, v in lab.items()} for lab in self.raw_labels
            ]
        if include_vectors and self.eigenvectors is not None:
            out["eigenvectors_re"] = self.eigenvectors.real.T.tolist()
            out["eigenvectors_im"] = self.eigenvectors.imag.T.tolist()
        return out


def _residuals(H: PauliSum, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    Hv = H.apply(vectors.T).T
    return np.linalg.norm(Hv - vectors * values[None, :], axis=0)


def _clusters(values: np.ndarray, tol: float = DEGENERACY_TOL) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, v in enumerate(values):
        if groups and abs(v - values[groups[-1][-1]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _complete_clusters(values: np.ndarray, k: int) -> int:
    """Smallest count >= k that does not split a degenerate cluster."""
    while k < len(values) and abs(values[k] - values[k - 1]) <= DEGENERACY_TOL:
        k += 1
    return k


def dense_spectrum(H: PauliSum, k: int | None = None) -> SpectrumReport:
    """Lowest ``k`` eigenpairs (all if None) by dense Hermitian diagonalisation.

    A degenerate cluster straddling position ``k`` is included whole so that
    sector classification can rotate it.

    Raises:
        ValueError: More than 12 qubits.
        ArithmeticError: A residual exceeds 1e-8.
    """
    if H.num_qubits > DENSE_MAX_QUBITS:
        raise ValueError(f"dense mode supports at most {DENSE_MAX_QUBITS} qubits")
    if not H.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    values, vectors = np.linalg.eigh(H.to_dense())
    k = len(values) if k is None else _complete_clusters(values, max(1, min(k, len(values))))
    values, vectors = values[:k], vectors[:, :k]
    res = _residuals(H, values, vectors)
    if np.any(res > DENSE_RESIDUAL):
        raise ArithmeticError(f"dense residual {res.max():.2e} above {DENSE_RESIDUAL}")
    return SpectrumReport(values, vectors, res, "dense", clusters=_clusters(values))


def sector_projector(op: SymmetryOp, label) -> callable:
    """Matrix-free orthogonal projector onto one symmetry sector.

    Args:
        op: Translation, Potts charge or U(1) charge.
        label: Momentum ``m`` for translations, eigenvalue for charges.
    """
    if isinstance(op, Translation):
        p = op.period()
        phase = np.exp(-2j * np.pi * label / p)

        def project(v):
            acc = v.copy()
            cur = v
            for r in range(1, p):
                cur = op.apply(cur)
                acc = acc + phase**r * cur
            return acc / p

        return project
    if isinstance(op, PottsCharge):
        sign = float(label)
        return lambda v: 0.5 * (v + sign * op.apply(v))
    if isinstance(op, U1Charge):
        L = op.num_qubits
        idx = np.arange(2**L)
        pop = np.zeros(2**L, dtype=int)
        for q in range(L):
            pop += (idx >> q) & 1
        mask = (L - 2 * pop) == int(label)
        return lambda v: v * mask
    raise TypeError(f"no sector projector for {type(op).__name__}")


def iterative_extremal(
    H: PauliSum,
    k: int = 1,
    sectors: Sequence[tuple[SymmetryOp, object]] = (),
    *,
    tol: float = 1e-12,
    maxiter: int | None = None,
    seed: int = 0,
) -> SpectrumReport:
    """Lowest ``k`` eigenpairs by matrix-free Lanczos, optionally inside a sector.

    Sector restriction is done by the shifted operator
    ``P H P + s (1 - P)`` with ``s`` above the spectrum, so states outside the
    sector never reach the lowest window.

    Args:
        H: Hermitian Hamiltonian on at most 22 qubits.
        k: Number of eigenpairs.
        sectors: ``(symmetry, label)`` pairs, see :func:`sector_projector`.
        tol: Lanczos tolerance passed to ``eigsh``.
        maxiter: Lanczos iteration cap.
        seed: Seed of the random start vector.

    Raises:
        ValueError: Register too large or ``k`` too large for Lanczos.
        ConvergenceError: Lanczos stopped early or a residual exceeds 1e-6.
    """
    L = H.num_qubits
    if L > ITERATIVE_MAX_QUBITS:
        raise ValueError(f"iterative mode supports at most {ITERATIVE_MAX_QUBITS} qubits")
    dim = 2**L
    if not 1 <= k < dim - 1:
        raise ValueError("k must satisfy 1 <= k < 2**L - 1")
    projectors = [sector_projector(op, lab) for op, lab in sectors]

    def project(v):
        for P in projectors:
            v = P(v)
        return v

    shift = 2.0 * H.norm_bound() + 1.0

    def matvec(v):
        v = np.asarray(v, dtype=complex).reshape(-1)
        if not projectors:
            return H.apply(v)
        pv = project(v)
        return project(H.apply(pv)) + shift * (v - pv)

    op = spla.LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    rng = np.random.default_rng(seed)
    v0 = project(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    n_req = min(k + 3, dim - 2)
    try:
        values, vectors = spla.eigsh(op, k=n_req, which="SA", v0=v0, tol=tol, maxiter=maxiter)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge: {exc}", np.sort(exc.eigenvalues)) from exc
    order = np.argsort(values)
    values, vectors = values[order], vectors[:, order]
    keep = _complete_clusters(values, k)
    if keep == len(values) and keep > k:
        keep = k
    values, vectors = values[:keep], vectors[:, :keep]
    if projectors and np.any(values > shift - 1e-6):
        raise ConvergenceError("sector holds fewer than k states", values)
    res = _residuals(H, values, vectors)
    if np.any(res > ITERATIVE_RESIDUAL):
        raise ConvergenceError(f"iterative residual {res.max():.2e} above {ITERATIVE_RESIDUAL}", values)
    return SpectrumReport(values, vectors, res, "iterative", clusters=_clusters(values))


def model_symmetries(model: ModelSpec) -> dict[str, SymmetryOp]:
    """Symmetries used for labelling, in rotation order (T, then C, then Q)."""
    out: dict[str, SymmetryOp] = {}
    T = model.translation()
    if T is not None:
        out["T"] = T
    charge = model.charge()
    if isinstance(charge, PottsCharge):
        out["C"] = charge
    elif isinstance(charge, U1Charge):
        out["Q"] = charge
    return out


def _restricted(op: SymmetryOp, vecs: np.ndarray) -> np.ndarray:
    applied = op.apply(vecs.T).T
    return vecs.conj().T @ applied


def _diagonalise_normal(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unitary eigenbasis of a normal matrix (complex Schur form)."""
    T, Z = scipy.linalg.schur(M, output="complex")
    return np.diag(T), Z


def _label(op: SymmetryOp, value: complex):
    if isinstance(op, Translation):
        p = op.period()
        return int(np.round(np.angle(value) * p / (2 * np.pi))) % p
    return int(np.round(value.real))


def _label_error(op: SymmetryOp, value: complex) -> float:
    if isinstance(op, Translation):
        m = _label(op, value)
        return abs(value - np.exp(2j * np.pi * m / op.period()))
    return abs(value - round(value.real))


def classify_sectors(report: SpectrumReport, symmetries: Mapping[str, SymmetryOp]) -> SpectrumReport:
    """Rotate degenerate clusters and label each eigenvector by its symmetry sectors.

    Within every cluster the symmetries are diagonalised one after another in
    the given order, each inside the eigenspaces of the previous ones.  The
    report's vectors are replaced by the rotated ones.

    Raises:
        ValueError: The report carries no eigenvectors.
        ArithmeticError: A label is not an eigenvalue to 1e-6 after rotation,
            meaning the spectrum window cuts a degenerate cluster.
    """
    if report.eigenvectors is None:
        raise ValueError("sector classification needs eigenvectors")
    vecs = report.eigenvectors.copy()
    ops = list(symmetries.items())

    def refine(cols: list[int], depth: int):
        if depth == len(ops) or len(cols) == 1:
            return
        _, op = ops[depth]
        M = _restricted(op, vecs[:, cols])
        vals, Z = _diagonalise_normal(M)
        vecs[:, cols] = vecs[:, cols] @ Z
        groups: list[list[int]] = []
        for pos, val in enumerate(vals):
            for g in groups:
                if abs(vals[g[0]] - val) <= LABEL_TOL:
                    g.append(pos)
                    break
            else:
                groups.append([pos])
        for g in groups:
            refine([cols[p] for p in g], depth + 1)

    for cluster in report.clusters:
        if len(cluster) > 1:
            refine(list(cluster), 0)

    labels, raw = [], []
    for i in range(vecs.shape[1]):
        v = vecs[:, i]
        lab, r = {}, {}
        for name, op in ops:
            value = complex(np.vdot(v, op.apply(v)))
            if _label_error(op, value) > LABEL_TOL:
                raise ArithmeticError(f"state {i} is not a {name} eigenvector (<{name}> = {value:.6g})")
            lab[name] = _label(op, value)
            r[name] = value
        labels.append(lab)
        raw.append(r)
    report.eigenvectors = vecs
    report.labels = labels
    report.raw_labels = raw
    return report


def ground_energy(H: PauliSum) -> float:
    """Exact ground energy, dense for small registers and Lanczos otherwise."""
    if H.num_qubits <= DENSE_MAX_QUBITS:
        return float(dense_spectrum(H, 1).eigenvalues[0])
    return float(iterative_extremal(H, 1).eigenvalues[0])
