"""Outer optimisation loop: fixed-depth QNG, layer growth, excited-state sweeps."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import ansatz, objective, qng, qsim
from .models import ModelSpec

log = logging.getLogger(__name__)


class DivergenceError(RuntimeError):
    """The cost became non-finite; ``trace`` holds the iterations so far."""

    def __init__(self, message: str, trace: list[dict]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one optimisation run.

    ``orth_weight=None`` picks twice a Lanczos estimate of the spectral width.
    ``backtrack`` caps how often a QNG step that raises the cost is halved
    before it is taken anyway; 0 gives the bare update.
    ``translation_sign`` (+1/-1) switches on the translation penalty with
    strength ``mu``; ``charge_mu`` switches on the charge penalty (Potts).
    """

    model: ModelSpec
    layout: str = "compressed10"
    tying: str = "general"
    final_1q_layer: bool = False
    lr: float = 0.04
    tol_iter: float = 5e-4
    tol_layer: float = 5e-4
    relative_tol: bool = False
    theta0: float = 0.1
    max_iters: int = 10000
    n_min: int = 1
    n_max: int | None = None
    eps: float = 1e-4
    backtrack: int = 8
    orth_weight: float | None = None
    translation_sign: int | None = None
    mu: float = 1.0
    charge_mu: float | None = None
    n_states: int = 1
    initial_bits: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.tol_iter <= 0 or self.tol_layer <= 0:
            raise ValueError("tolerances must be positive")
        if self.n_min < 1:
            raise ValueError("n_min must be at least 1")
        if self.lr <= 0:
            raise ValueError("learning rate must be positive")
        if self.n_states < 1:
            raise ValueError("n_states must be at least 1")

    @property
    def depth_cap(self) -> int:
        return self.n_max if self.n_max is not None else 3 * self.model.L

    def circuit_spec(self, N: int) -> ansatz.CircuitSpec:
        return ansatz.CircuitSpec(self.model.L, N, self.layout, self.tying, self.final_1q_layer)

    def initial_state(self) -> np.ndarray:
        if self.initial_bits is None:
            return qsim.zero_state(self.model.L)
        return qsim.basis_state(self.initial_bits)

    def base_cost(self) -> objective.CostSpec:
        H = self.model.hamiltonian()
        translation = charge = None
        if self.translation_sign is not None:
            T = self.model.translation()
            if T is None:
                raise ValueError(f"{self.model.kind} model has no translation symmetry")
            translation = (T, int(self.translation_sign), self.mu)
        if self.charge_mu is not None:
            if self.model.kind != "potts":
                raise ValueError("charge penalty is defined for the Potts model only")
            charge = (self.model.charge(), self.charge_mu)
        return objective.CostSpec(H, (), translation, charge)


@dataclass
class EigenResult:
    energy: float
    cost: float
    params: np.ndarray
    state: np.ndarray
    N: int
    trace: list[dict] = field(default_factory=list)
    per_depth: list[dict] = field(default_factory=list)
    termination: str = ""


def spectral_width(H) -> float:
    """Cheap Lanczos estimate of ``E_max - E_min``."""
    from scipy.sparse.linalg import eigsh

    if H.num_qubits <= 3:
        w = np.linalg.eigvalsh(H.to_dense())
        return float(w[-1] - w[0])
    op = H.to_sparse()
    lo = eigsh(op, k=1, which="SA", tol=1e-4, return_eigenvectors=False)[0]
    hi = eigsh(op, k=1, which="LA", tol=1e-4, return_eigenvectors=False)[0]
    return float(hi - lo)


def _converged(prev: float, cur: float, tol: float, relative: bool, step_fraction: float = 1.0) -> bool:
    # a step shortened by backtracking is judged per unit of the nominal step
    diff = abs(cur - prev) / step_fraction
    if relative:
        diff /= max(abs(cur), 1e-12)
    return diff < tol


def optimize_fixed_depth(
    config: RunConfig,
    N: int,
    warm_params: np.ndarray | None = None,
    cost: objective.CostSpec | None = None,
    callback: Callable[[dict], None] | None = None,
) -> EigenResult:
    """QNG iterations at a fixed depth until successive costs agree to ``tol_iter``.

    Returns the best iterate seen, not necessarily the last one.
    """
    cost = cost if cost is not None else config.base_cost()
    spec = config.circuit_spec(N)
    circuit = ansatz.build_circuit(spec)
    params = ansatz.initial_params(spec, config.theta0) if warm_params is None else np.array(warm_params, dtype=float)
    if params.shape != (spec.num_params,):
        raise ValueError(f"warm start has {params.shape} parameters, circuit needs {spec.num_params}")
    psi0 = config.initial_state()
    trace: list[dict] = []
    best = None
    prev = None
    fraction = 1.0
    termination = "max_iters"
    t_start = time.perf_counter()
    for it in range(config.max_iters + 1):
        cg = objective.gradient(cost, circuit, params, psi0)
        energy = float(np.vdot(cg.state, cost.hamiltonian.apply(cg.state)).real)
        row = {
            "iter": it,
            "N": N,
            "cost": cg.value,
            "energy": energy,
            "grad_norm": float(np.linalg.norm(cg.gradient)),
            "wall_ms": 1e3 * (time.perf_counter() - t_start),
        }
        trace.append(row)
        if callback is not None:
            callback(row)
        if not np.isfinite(cg.value):
            raise DivergenceError(f"non-finite cost at depth {N}, iteration {it}", trace)
        if best is None or cg.value < best[0]:
            best = (cg.value, energy, params.copy(), cg.state.copy())
        if prev is not None and _converged(prev, cg.value, config.tol_iter, config.relative_tol, fraction):
            termination = "converged"
            break
        if it == config.max_iters:
            break
        prev = cg.value
        metric = qng.fubini_study_metric(cg.state, cg.tangents)
        params, fraction = _safeguarded_step(config, cost, circuit, psi0, params, cg, metric)
    value, energy, best_params, state = best
    log.debug("depth %d: cost %.8f after %d iterations (%s)", N, value, len(trace) - 1, termination)
    return EigenResult(energy, value, best_params, state, N, trace, [], termination)


def _safeguarded_step(config, cost, circuit, psi0, params, cg, metric) -> tuple[np.ndarray, float]:
    """QNG step, halved while it raises the cost; returns (params, fraction of lr used)."""
    fraction = 1.0
    for _ in range(config.backtrack):
        trial = qng.qng_step(params, cg.gradient, metric, config.lr * fraction, config.eps)
        psi, _ = qsim.apply_circuit_with_tangents(circuit, trial, psi0, want_tangents=False)
        if objective.evaluate(cost, psi) <= cg.value:
            return trial, fraction
        fraction *= 0.5
    return qng.qng_step(params, cg.gradient, metric, config.lr * fraction, config.eps), fraction


def grow_layers(
    config: RunConfig,
    cost: objective.CostSpec | None = None,
    callback: Callable[[dict], None] | None = None,
) -> EigenResult:
    """Optimise at ``n_min`` layers, then add layers until the cost settles.

    Each new layer is appended after the existing ones with all angles at
    ``theta0 / 10``; the earlier layers keep their optimised angles.
    """
    cost = cost if cost is not None else config.base_cost()
    N = config.n_min
    result = optimize_fixed_depth(config, N, None, cost, callback)
    trace = list(result.trace)
    per_depth = [_depth_summary(result)]
    termination = "n_max"
    while N < config.depth_cap:
        warm = ansatz.extend_params(result.params, config.circuit_spec(N), 1, config.theta0 / 10)
        N += 1
        nxt = optimize_fixed_depth(config, N, warm, cost, callback)
        trace += nxt.trace
        per_depth.append(_depth_summary(nxt))
        done = _converged(result.cost, nxt.cost, config.tol_layer, config.relative_tol)
        result = nxt
        if done:
            termination = "layer_converged"
            break
    result.trace = trace
    result.per_depth = per_depth
    result.termination = termination
    return result


def _depth_summary(r: EigenResult) -> dict:
    return {"N": r.N, "cost": r.cost, "energy": r.energy, "iterations": len(r.trace) - 1, "termination": r.termination}


def solve_spectrum(
    config: RunConfig,
    n_states: int | None = None,
    callback: Callable[[int, dict], None] | None = None,
) -> list[EigenResult]:
    """Lowest ``n_states`` states of the configured sector, found one after another.

    State ``k`` minimises the energy plus overlap penalties against states
    ``0..k-1`` (and the configured symmetry penalties).
    """
    n_states = config.n_states if n_states is None else n_states
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    cost = config.base_cost()
    weight = config.orth_weight
    if weight is None and n_states > 1:
        weight = 2.0 * spectral_width(cost.hamiltonian)
    results = []
    for k in range(n_states):
        cb = None if callback is None else (lambda row, k=k: callback(k, row))
        res = grow_layers(config, cost, cb)
        log.info("state %d: energy %.8f at N=%d", k, res.energy, res.N)
        results.append(res)
        if k + 1 < n_states:
            cost = cost.with_orthogonal(res.state, weight)
    return results
