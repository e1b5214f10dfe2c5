"""Dense statevector simulation.

States are plain 1-D complex numpy arrays of length ``2**L``. Qubit 0 is the
most significant bit of the basis index, so the amplitude of ``|b_0 b_1 ...
b_{L-1}>`` sits at index ``sum(b_q << (L - 1 - q))``. Reshaping a state to
``(2,) * L`` therefore puts qubit ``q`` on axis ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_QUBITS = 24

_I2 = np.eye(2, dtype=complex)


def zero_state(num_qubits: int) -> np.ndarray:
    """Return ``|0...0>`` on ``num_qubits`` qubits."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(
            f"register too large or empty: {num_qubits} qubits (allowed 1..{MAX_QUBITS})"
        )
    psi = np.zeros(2**num_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(bits: Sequence[int]) -> np.ndarray:
    """Computational basis state with ``bits[q]`` on qubit ``q``."""
    psi = zero_state(len(bits))
    psi[:] = 0.0
    psi[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return psi


def num_qubits(state: np.ndarray) -> int:
    n = int(state.shape[-1]).bit_length() - 1
    if 2**n != state.shape[-1]:
        raise ValueError(f"state length {state.shape[-1]} is not a power of two")
    return n


def is_unitary(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(matrix)
    return bool(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() <= atol)


@dataclass(frozen=True)
class Gate:
    """A fixed 1- or 2-qubit unitary acting on ``qubits`` (in matrix order)."""

    qubits: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        matrix = np.asarray(self.matrix, dtype=complex)
        if len(qubits) not in (1, 2) or len(set(qubits)) != len(qubits):
            raise ValueError(f"gate support must be 1 or 2 distinct qubits, got {qubits}")
        if matrix.shape != (2 ** len(qubits),) * 2:
            raise ValueError(f"matrix shape {matrix.shape} does not match support {qubits}")
        if not is_unitary(matrix):
            raise ValueError("gate matrix is not unitary to 1e-12")
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "matrix", matrix)


def apply_matrix(states: np.ndarray, matrix: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Apply a 2x2 or 4x4 matrix on ``qubits`` to a state or a batch of states.

    ``states`` has shape ``(..., 2**L)``. ``matrix`` may carry one extra
    leading batch axis ``S``, in which case the output has shape
    ``(S, ..., 2**L)``. The matrix need not be unitary (derivative matrices
    go through here too). The full ``2**L`` operator is never formed.
    """
    states = np.asarray(states)
    L = num_qubits(states)
    qubits = tuple(int(q) for q in qubits)
    k = len(qubits)
    if k not in (1, 2) or any(not 0 <= q < L for q in qubits) or len(set(qubits)) != k:
        raise ValueError(f"bad support {qubits} for {L} qubits")
    mat = np.asarray(matrix)
    batched = mat.ndim == 3
    if k == 2 and qubits[0] > qubits[1]:
        qubits = qubits[::-1]
        mat = mat[..., _SWAP_IDX, :][..., _SWAP_IDX]
    first, last = qubits[0], qubits[-1]
    mid = 2 ** (last - first - 1) if k == 2 else 1
    rest = 2 ** (L - 1 - last)
    if mid == 1:
        v = states.reshape(-1, 2**k, rest)
        out = (mat[:, None] if batched else mat) @ v
    else:
        # (X, 2, mid, 2, rest) -> (X, mid, rest, 4), act, and fold back
        v = states.reshape(-1, 2, mid, 2, rest).transpose(0, 2, 4, 1, 3).reshape(-1, mid, rest, 4)
        mt = np.swapaxes(mat, -1, -2)
        out = v @ (mt[:, None, None] if batched else mt)
        out = out.reshape(out.shape[:-1] + (2, 2))
        n = out.ndim
        out = out.transpose(list(range(n - 5)) + [n - 5, n - 2, n - 4, n - 1, n - 3])
    return out.reshape(((mat.shape[0],) if batched else ()) + states.shape)


_SWAP_IDX = [0, 2, 1, 3]


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Return ``(gate (x) identity) |state>``."""
    return apply_matrix(state, gate.matrix, gate.qubits)


def inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    """``<a|b>`` with ``a`` conjugated."""
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def expectation(state: np.ndarray, observable, check_real: bool = True) -> float:
    """``<psi|O|psi>`` for a Hermitian observable exposing ``apply``."""
    if getattr(observable, "num_qubits", num_qubits(state)) != num_qubits(state):
        raise ValueError("qubit count mismatch between state and observable")
    val = np.vdot(state, observable.apply(state))
    if check_real:
        scale = max(1.0, abs(val.real))
        assert abs(val.imag) <= 1e-10 * scale, f"non-real expectation {val}"
    return float(val.real)


@dataclass(frozen=True)
class Rotation:
    """``exp(-i * theta * G)`` with ``theta = params[param]`` and ``G @ G = I``.

    The generator is given on ``qubits`` only. Pauli strings, including the
    identity (a trainable global phase), are the intended generators.
    """

    qubits: tuple[int, ...]
    generator: np.ndarray = field(repr=False)
    param: int
    label: str = ""

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=complex)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "generator", g)
        if g.shape != (2 ** len(self.qubits),) * 2:
            raise ValueError("generator shape does not match support")
        if np.abs(g @ g - np.eye(g.shape[0])).max() > 1e-12 or np.abs(g - g.conj().T).max() > 1e-12:
            raise ValueError("rotation generator must be Hermitian and square to identity")

    def matrix(self, theta: float) -> np.ndarray:
        return np.cos(theta) * np.eye(self.generator.shape[0]) - 1j * np.sin(theta) * self.generator


def _embed(matrix: np.ndarray, qubits: tuple[int, ...], support: tuple[int, ...]) -> np.ndarray:
    """Lift an operator on ``qubits`` to the (1- or 2-qubit) ``support`` frame."""
    if qubits == support:
        return matrix
    if len(support) == 2 and len(qubits) == 1:
        if qubits[0] == support[0]:
            return np.kron(matrix, _I2)
        return np.kron(_I2, matrix)
    if len(support) == 2 and qubits == support[::-1]:
        swap = np.eye(4)[[0, 2, 1, 3]]
        return swap @ matrix @ swap
    raise ValueError(f"cannot embed {qubits} into {support}")


class Circuit:
    """Ordered list of fixed gates and parametrized rotations on ``L`` qubits.

    For simulation, maximal runs of consecutive operations living on a common
    pair of qubits are fused into one block; a tied parameter may occur any
    number of times.
    """

    def __init__(self, num_qubits: int, ops: Sequence[Gate | Rotation], num_params: int):
        self.num_qubits = int(num_qubits)
        self.ops = tuple(ops)
        self.num_params = int(num_params)
        for op in self.ops:
            if any(not 0 <= q < self.num_qubits for q in op.qubits):
                raise ValueError(f"operation support {op.qubits} outside register")
            if isinstance(op, Rotation) and not 0 <= op.param < self.num_params:
                raise ValueError(f"parameter index {op.param} out of range")
        self._blocks = self._fuse()

    def _fuse(self):
        blocks: list[tuple[tuple[int, ...], list]] = []
        for op in self.ops:
            q = set(op.qubits)
            if blocks:
                support, members = blocks[-1]
                if q <= set(support):
                    members.append(op)
                    continue
                if len(support) == 1 and len(q | set(support)) == 2 and len(op.qubits) <= 2:
                    new = tuple(support) + tuple(x for x in op.qubits if x not in support)
                    blocks[-1] = (new, members + [op])
                    continue
            blocks.append((op.qubits, [op]))
        out = []
        for support, members in blocks:
            ops = [(m, _embed(m.generator if isinstance(m, Rotation) else m.matrix, m.qubits, support)) for m in members]
            # blocks with equal keys and equal angles share one matrix (tied ansatz)
            key = tuple(
                (
                    id(m.generator) if isinstance(m, Rotation) else id(m.matrix),
                    tuple(support.index(x) for x in m.qubits),
                    getattr(m, "param", -1),
                )
                for m in members
            )
            out.append((support, ops, key))
        return out

    @property
    def num_blocks(self) -> int:
        return len(self._blocks)

    def _block_matrices(self, ops, params, want_derivs):
        d = ops[0][1].shape[0]
        mats = []
        for op, emb in ops:
            if isinstance(op, Rotation):
                th = params[op.param]
                mats.append(np.cos(th) * np.eye(d) - 1j * np.sin(th) * emb)
            else:
                mats.append(emb)
        total = np.eye(d, dtype=complex)
        prefix = []
        for m in mats:
            total = m @ total
            prefix.append(total)
        if not want_derivs:
            return total, [], None
        idx, derivs = [], []
        suffix = np.eye(d, dtype=complex)
        for k in range(len(mats) - 1, -1, -1):
            op, emb = ops[k]
            if isinstance(op, Rotation):
                idx.append(op.param)
                derivs.append(suffix @ (-1j * emb) @ prefix[k])
            suffix = suffix @ mats[k]
        return total, idx, np.array(derivs) if derivs else None

    def unitary(self, params: Sequence[float]) -> np.ndarray:
        """Dense ``2**L`` unitary of the circuit (small registers only)."""
        dim = 2**self.num_qubits
        cols = apply_circuit_with_tangents(self, params, np.eye(dim, dtype=complex), want_tangents=False)[0]
        return cols.T


def apply_circuit_with_tangents(
    circuit: Circuit,
    params: Sequence[float],
    state: np.ndarray,
    want_tangents: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Run ``circuit`` on ``state``, optionally with exact tangent states.

    Tangents are obtained by generator insertion: each occurrence of
    ``exp(-i theta G)`` contributes ``(-i G)`` at its own position, and the
    occurrences of a tied parameter are summed. No finite differences or
    parameter shifts are involved.

    Args:
        circuit: The compiled circuit.
        params: Flat parameter vector of length ``circuit.num_params``.
        state: Input state; a batch ``(B, 2**L)`` is allowed when
            ``want_tangents`` is False.
        want_tangents: Also return ``d psi / d theta_p`` for every parameter.

    Returns:
        ``(psi, tangents)`` where ``tangents`` has shape ``(P, 2**L)`` or is
        None.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.num_params,):
        raise ValueError(f"expected {circuit.num_params} parameters, got {params.shape}")
    psi = np.array(state, dtype=complex)
    if num_qubits(psi) != circuit.num_qubits:
        raise ValueError("state size does not match circuit")
    tangents = np.zeros((circuit.num_params, psi.shape[-1]), dtype=complex) if want_tangents else None
    live = 0
    cache: dict = {}
    for support, ops, key in circuit._blocks:
        ck = (key, tuple(params[p] for *_, p in key if p >= 0))
        if ck not in cache:
            cache[ck] = circuit._block_matrices(ops, params, want_tangents)
        total, idx, derivs = cache[ck]
        if want_tangents:
            if live:
                tangents[:live] = apply_matrix(tangents[:live], total, support)
            if idx:
                contrib = apply_matrix(psi, derivs, support)
                for p, row in zip(idx, contrib):
                    tangents[p] += row
                live = max(live, max(idx) + 1)
        psi = apply_matrix(psi, total, support)
    return psi, tangents
