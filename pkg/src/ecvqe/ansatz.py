"""Euler-Cartan brick-wall circuits.

One layer is two sublayers of two-qubit blocks on a ring: sublayer A on
bonds (0,1), (2,3), ... and sublayer B on bonds (1,2), ..., (L-1,0). Each
block is built from ``exp(-i theta G)`` rotations only, so exact tangents
come from generator insertion.

Block layouts (angle slots in parameter order):

``compressed10``
    ZYZ Euler angles (a, b, c) on the first wire, the same on the second
    wire, the entangler (alpha, beta, gamma), and a global-phase angle.
    Matrix: ``exp(-i t9) N(alpha, beta, gamma) (E1 (x) E2)``.
``full_kak15``
    ZYZ pairs before (6), entangler (3), ZYZ pairs after (6).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .qsim import Circuit, Rotation
from .synthesis import XX, YY, ZZ, EulerAngles, entangler, kak_decompose, ry, rz

LAYOUTS = {"compressed10": 10, "full_kak15": 15}
TYINGS = ("general", "trans_r1", "trans_r2")

_Z = np.diag([1.0 + 0j, -1.0])
_Y = np.array([[0, -1j], [1j, 0]])
_I4 = np.eye(4, dtype=complex)
_GEN = {"rz": _Z, "ry": _Y, "rxx": XX, "ryy": YY, "rzz": ZZ, "phase": _I4}


@dataclass(frozen=True)
class CircuitSpec:
    """Shape of an Euler-Cartan brick wall.

    Attributes:
        L: Number of qubits (even, at least 4).
        N: Number of layers.
        layout: ``"compressed10"`` or ``"full_kak15"``.
        tying: ``"general"`` (every block free), ``"trans_r2"`` (one block per
            sublayer, commutes with translation by two sites) or
            ``"trans_r1"`` (both sublayers of a layer share one block).
        final_1q_layer: Append ZYZ rotations on every qubit after the last
            layer.
    """

    L: int
    N: int
    layout: str = "compressed10"
    tying: str = "general"
    final_1q_layer: bool = False

    def __post_init__(self):
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown block layout {self.layout!r}")
        if self.tying not in TYINGS:
            raise ValueError(f"unknown tying mode {self.tying!r}")
        if self.L % 2 or self.L < 4:
            raise ValueError(f"brick-wall ring needs an even L >= 4, got {self.L}")
        if self.N < 1:
            raise ValueError("need at least one layer")

    @property
    def block_size(self) -> int:
        return LAYOUTS[self.layout]

    @property
    def blocks_per_sublayer(self) -> int:
        return self.L // 2

    @property
    def params_per_layer(self) -> int:
        k = self.block_size
        return {"general": k * self.L, "trans_r1": k, "trans_r2": 2 * k}[self.tying]

    @property
    def final_params(self) -> int:
        if not self.final_1q_layer:
            return 0
        return {"general": 3 * self.L, "trans_r1": 3, "trans_r2": 6}[self.tying]

    @property
    def num_params(self) -> int:
        return self.N * self.params_per_layer + self.final_params

    def with_layers(self, N: int) -> CircuitSpec:
        return CircuitSpec(self.L, N, self.layout, self.tying, self.final_1q_layer)

    def bonds(self, sublayer: int) -> list[tuple[int, int]]:
        start = 0 if sublayer == 0 else 1
        return [(q, (q + 1) % self.L) for q in range(start, self.L, 2)]

    def block_offset(self, layer: int, sublayer: int, block: int) -> int:
        """Index of the first angle slot of one block."""
        k = self.block_size
        base = layer * self.params_per_layer
        if self.tying == "general":
            return base + (sublayer * self.blocks_per_sublayer + block) * k
        if self.tying == "trans_r2":
            return base + sublayer * k
        return base

    def param_labels(self) -> list[str]:
        """Human-readable name of each parameter's (first) occurrence."""
        labels: list[str | None] = [None] * self.num_params
        names = _slot_names(self.layout)
        for layer in range(self.N):
            for sub in (0, 1):
                for b in range(self.blocks_per_sublayer):
                    off = self.block_offset(layer, sub, b)
                    for s, name in enumerate(names):
                        if labels[off + s] is None:
                            labels[off + s] = f"layer{layer}/{'AB'[sub]}/block{b}/{name}"
        for s in range(self.final_params):
            labels[self.N * self.params_per_layer + s] = f"final/{s}"
        return labels  # type: ignore[return-value]

    def phase_slots(self) -> list[int]:
        """Parameter indices of global-phase angles (compressed10 only)."""
        if self.layout != "compressed10":
            return []
        return sorted(
            {
                self.block_offset(layer, sub, b) + 9
                for layer in range(self.N)
                for sub in (0, 1)
                for b in range(self.blocks_per_sublayer)
            }
        )


def _slot_names(layout: str) -> list[str]:
    euler = ["a", "b", "c"]
    pre = [f"pre{w}_{e}" for w in (1, 2) for e in euler]
    ent = ["alpha", "beta", "gamma"]
    if layout == "compressed10":
        return pre + ent + ["phase"]
    return pre + ent + [f"post{w}_{e}" for w in (1, 2) for e in euler]


def _euler_ops(wire: int, off: int) -> list[Rotation]:
    # E = Rz(a) Ry(b) Rz(c): c acts first
    return [
        Rotation((wire,), _GEN["rz"], off + 2, "rz"),
        Rotation((wire,), _GEN["ry"], off + 1, "ry"),
        Rotation((wire,), _GEN["rz"], off, "rz"),
    ]


def block_ops(layout: str, qubits: tuple[int, int], off: int) -> list[Rotation]:
    """Time-ordered rotations of one block whose first slot is ``off``."""
    q1, q2 = qubits
    ops = _euler_ops(q1, off) + _euler_ops(q2, off + 3)
    ops += [
        Rotation((q1, q2), _GEN["rxx"], off + 6, "rxx"),
        Rotation((q1, q2), _GEN["ryy"], off + 7, "ryy"),
        Rotation((q1, q2), _GEN["rzz"], off + 8, "rzz"),
    ]
    if layout == "compressed10":
        ops.append(Rotation((q1, q2), _GEN["phase"], off + 9, "phase"))
    else:
        ops += _euler_ops(q1, off + 9) + _euler_ops(q2, off + 12)
    return ops


def block_matrix(layout: str, angles) -> np.ndarray:
    """4x4 unitary of a single block (first wire = most significant)."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (LAYOUTS[layout],):
        raise ValueError(f"{layout} block takes {LAYOUTS[layout]} angles, got {angles.shape}")

    def euler(a, b, c):
        return rz(a) @ ry(b) @ rz(c)

    pre = np.kron(euler(*angles[0:3]), euler(*angles[3:6]))
    u = entangler(*angles[6:9]) @ pre
    if layout == "compressed10":
        return np.exp(-1j * angles[9]) * u
    return np.kron(euler(*angles[9:12]), euler(*angles[12:15])) @ u


def kak_block_angles(u: np.ndarray) -> tuple[np.ndarray, float]:
    """``full_kak15`` angles reproducing ``u`` up to the returned global phase.

    ``u = exp(i phase) * block_matrix("full_kak15", angles)``.
    """
    from .synthesis import euler_decompose

    k = kak_decompose(u)
    eul = [euler_decompose(m) for m in (k.B1, k.B2, k.A1, k.A2)]
    phase = k.phase + sum(e.phase for e in eul)
    angles = []
    for e in eul[:2]:
        angles += [e.a, e.b, e.c]
    angles += [k.alpha, k.beta, k.gamma]
    for e in eul[2:]:
        angles += [e.a, e.b, e.c]
    return np.array(angles), float(phase)


class EulerCartanCircuit(Circuit):
    """A compiled brick wall that remembers its :class:`CircuitSpec`."""

    def __init__(self, spec: CircuitSpec):
        ops: list[Rotation] = []
        for layer in range(spec.N):
            for sub in (0, 1):
                for b, bond in enumerate(spec.bonds(sub)):
                    ops += block_ops(spec.layout, bond, spec.block_offset(layer, sub, b))
        if spec.final_1q_layer:
            base = spec.N * spec.params_per_layer
            for q in range(spec.L):
                if spec.tying == "general":
                    off = base + 3 * q
                elif spec.tying == "trans_r2":
                    off = base + 3 * (q % 2)
                else:
                    off = base
                ops += _euler_ops(q, off)
        super().__init__(spec.L, ops, spec.num_params)
        self.spec = spec

    def to_json(self) -> str:
        gates = [
            {"kind": op.label, "qubits": list(op.qubits), "param_index": op.param}
            for op in self.ops
        ]
        s = self.spec
        return json.dumps({"L": s.L, "N": s.N, "layout": s.layout, "tying": s.tying, "final_1q_layer": s.final_1q_layer, "gates": gates})


def build_circuit(spec: CircuitSpec) -> EulerCartanCircuit:
    return EulerCartanCircuit(spec)


def initial_params(spec: CircuitSpec, theta0: float = 0.1) -> np.ndarray:
    """Uniform starting angles."""
    return np.full(spec.num_params, float(theta0))


def extend_params(params: np.ndarray, spec: CircuitSpec, new_layers: int = 1, fill: float = 0.01) -> np.ndarray:
    """Warm start for ``spec.N + new_layers`` layers.

    Existing layer angles are kept in place; the appended layers start at
    ``fill``; the optional final single-qubit layer keeps its angles.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.num_params,):
        raise ValueError("parameter vector does not match spec")
    cut = spec.N * spec.params_per_layer
    grown = np.full(new_layers * spec.params_per_layer, float(fill))
    return np.concatenate([params[:cut], grown, params[cut:]])


__all__ = [
    "CircuitSpec",
    "EulerAngles",
    "EulerCartanCircuit",
    "block_matrix",
    "block_ops",
    "build_circuit",
    "extend_params",
    "initial_params",
    "kak_block_angles",
]
