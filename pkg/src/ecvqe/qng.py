"""Quantum natural gradient with the Fubini-Study metric."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


def geometric_tensor(state: np.ndarray, tangents: np.ndarray) -> np.ndarray:
    """``G_ij = <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>``."""
    tangents = np.asarray(tangents)
    if tangents.ndim != 2 or (tangents.size and tangents.shape[1] != state.shape[-1]):
        raise ValueError("tangents must have shape (P, len(state))")
    overlap = tangents.conj() @ state
    g = tangents.conj() @ tangents.T - np.outer(overlap, overlap.conj())
    return 0.5 * (g + g.conj().T)


def fubini_study_metric(state: np.ndarray, tangents: np.ndarray) -> np.ndarray:
    """Real part of the quantum geometric tensor."""
    return geometric_tensor(state, tangents).real


@dataclass
class MetricReport:
    metric: np.ndarray
    regularization: float
    min_eigenvalue: float
    condition: float

    @classmethod
    def from_metric(cls, metric: np.ndarray, eps: float) -> MetricReport:
        if metric.size == 0:
            return cls(metric, eps, float("nan"), 1.0)
        w = np.linalg.eigvalsh(metric)
        return cls(metric, eps, float(w[0]), float((w[-1] + eps) / (w[0] + eps)))


def qng_step(params: np.ndarray, grad: np.ndarray, metric: np.ndarray, lr: float, eps: float = 1e-6) -> np.ndarray:
    """``theta - lr * (g + eps I)^{-1} grad`` via a Cholesky solve.

    Raises:
        numpy.linalg.LinAlgError: the regularised metric is not positive
            definite.
    """
    if lr <= 0:
        raise ValueError("learning rate must be positive")
    params = np.asarray(params, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if not np.any(grad):
        return params.copy()
    a = np.asarray(metric, dtype=float) + eps * np.eye(len(params))
    factor = scipy.linalg.cho_factor(a, lower=True, check_finite=True)
    return params - lr * scipy.linalg.cho_solve(factor, grad)
