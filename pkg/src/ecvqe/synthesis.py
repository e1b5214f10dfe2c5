"""Single- and two-qubit unitary synthesis.

Rotation convention throughout: ``R_a(t) = exp(-i t a)`` for a Pauli matrix
``a`` (no factor 1/2). The two-qubit entangler is
``N(alpha, beta, gamma) = exp(-i (alpha XX + beta YY + gamma ZZ))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PAULI_MATRICES
from .qsim import Gate, is_unitary

X, Y, Z, I2 = (PAULI_MATRICES[k] for k in "XYZI")
XX, YY, ZZ = np.kron(X, X), np.kron(Y, Y), np.kron(Z, Z)

# Columns: (|00>+|11>)/√2, i(|00>-|11>)/√2, i(|01>+|10>)/√2, (|01>-|10>)/√2.
# Conjugation by this basis maps SU(2) x SU(2) onto SO(4) and makes XX, YY, ZZ diagonal.
MAGIC = np.array(
    [[1, 1j, 0, 0], [0, 0, 1j, 1], [0, 0, 1j, -1], [1, -1j, 0, 0]], dtype=complex
) / np.sqrt(2)
MAGIC_DAG = MAGIC.conj().T
# diagonal of MAGIC^dag (XX, YY, ZZ) MAGIC, as rows
_MAGIC_SIGNS = np.array([np.real(np.diag(MAGIC_DAG @ p @ MAGIC)) for p in (XX, YY, ZZ)])
# solve -angle(d) = signs^T (alpha, beta, gamma) + phi
_ANGLE_SYSTEM = np.vstack([_MAGIC_SIGNS, np.ones(4)]).T

CNOT_01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CNOT_10 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)


def rx(t: float) -> np.ndarray:
    return np.cos(t) * I2 - 1j * np.sin(t) * X


def ry(t: float) -> np.ndarray:
    return np.cos(t) * I2 - 1j * np.sin(t) * Y


def rz(t: float) -> np.ndarray:
    return np.diag([np.exp(-1j * t), np.exp(1j * t)])


def entangler(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Closed-form ``exp(-i (alpha XX + beta YY + gamma ZZ))`` via the magic basis."""
    d = np.exp(-1j * (_MAGIC_SIGNS.T @ np.array([alpha, beta, gamma], dtype=float)))
    return (MAGIC * d) @ MAGIC_DAG


@dataclass(frozen=True)
class EulerAngles:
    """``U = exp(i phase) Rz(a) Ry(b) Rz(c)``."""

    a: float
    b: float
    c: float
    phase: float

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.phase) * (rz(self.a) @ ry(self.b) @ rz(self.c))


def euler_decompose(u: np.ndarray, atol: float = 1e-10) -> EulerAngles:
    """ZYZ Euler angles of a 2x2 unitary, with ``b`` in ``[0, pi/2]``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u, atol):
        raise ValueError("euler_decompose needs a 2x2 unitary")
    phase = np.angle(np.linalg.det(u)) / 2
    # v = [[e^{-i(a+c)} cos b, .], [e^{i(a-c)} sin b, .]] is special unitary
    v = u * np.exp(-1j * phase)
    b = np.arctan2(abs(v[1, 0]), abs(v[0, 0]))
    d = np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-14 else 0.0
    s = -np.angle(v[0, 0]) if abs(v[0, 0]) > 1e-14 else d
    return EulerAngles(float((s + d) / 2), float(b), float((s - d) / 2), float(phase))


@dataclass(frozen=True)
class KakFactors:
    """``U = exp(i phase) (A1 (x) A2) N(alpha, beta, gamma) (B1 (x) B2)``.

    ``A1``/``B1`` act on the first qubit of the pair. All four local factors
    are special unitary.
    """

    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    alpha: float
    beta: float
    gamma: float
    phase: float

    @property
    def interaction_coefficients(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def matrix(self) -> np.ndarray:
        return (
            np.exp(1j * self.phase)
            * np.kron(self.A1, self.A2)
            @ entangler(self.alpha, self.beta, self.gamma)
            @ np.kron(self.B1, self.B2)
        )


def _kron_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``m = a (x) b`` (up to a scalar folded into ``a``)."""
    t = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(t)
    a = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    return a, b


def _to_special(m: np.ndarray) -> tuple[np.ndarray, float]:
    """``m = exp(i phase) s`` with ``det s = 1``."""
    phase = np.angle(np.linalg.det(m)) / 2
    return m * np.exp(-1j * phase), float(phase)


def _real_orthogonal_eigenbasis(m: np.ndarray) -> np.ndarray:
    """Real orthogonal eigenbasis of a complex symmetric unitary matrix.

    Its real and imaginary parts are commuting real symmetric matrices; a
    generic fixed combination of them is diagonalised and accepted once it
    diagonalises both parts. Ties inside degenerate clusters are then fixed by
    a sort on eigenvector entries, so the output is deterministic.
    """
    re, im = m.real, m.imag
    for c in (0.7071067811865476, 0.3141592653589793, 0.8660254037844386, 0.12345678910111213):
        w, p = np.linalg.eigh(c * re + (1 - c) * im)
        dr = p.T @ re @ p
        di = p.T @ im @ p
        if np.abs(dr - np.diag(np.diag(dr))).max() < 1e-10 and np.abs(di - np.diag(np.diag(di))).max() < 1e-10:
            for k in range(4):
                j = np.argmax(np.abs(p[:, k]) > 1e-8)
                if p[j, k] < 0:
                    p[:, k] *= -1
            if np.linalg.det(p) < 0:
                p[:, 0] *= -1
            return p
    raise ArithmeticError("KAK eigenbasis pairing failed to converge")


def _canonicalize(v: list[float], left: list[np.ndarray], right: list[np.ndarray]) -> None:
    """Move ``N(v)`` into ``pi/4 >= alpha >= beta >= |gamma|`` in place.

    Keeps ``(left0 (x) left1) N(v) (right0 (x) right1)`` fixed up to a global
    phase; all corrections are special unitary.
    """
    flippers = [1j * X, 1j * Y, 1j * Z]
    # w sigma_j w^dag permutes the two named axes (signs cancel in sigma (x) sigma)
    swappers = {
        (0, 1): _to_special(np.diag([1, 1j]))[0],
        (0, 2): _to_special(np.array([[1, 1], [1, -1]]) / np.sqrt(2))[0],
        (1, 2): (I2 - 1j * X) / np.sqrt(2),
    }

    def conj_local(w0, w1):
        # N(v) = (w0 (x) w1)^dag N(v') (w0 (x) w1)
        left[0] = left[0] @ w0.conj().T
        left[1] = left[1] @ w1.conj().T
        right[0] = w0 @ right[0]
        right[1] = w1 @ right[1]

    def shift(k, step):
        # exp(-i v sigma sigma) = exp(-i (v + step pi/2) sigma sigma) exp(i step pi/2 sigma sigma)
        v[k] += step * np.pi / 2
        right[0] = flippers[k] @ right[0]
        right[1] = flippers[k] @ right[1]

    def negate(k1, k2):
        v[k1], v[k2] = -v[k1], -v[k2]
        conj_local(flippers[3 - k1 - k2], I2)

    def swap(k1, k2):
        v[k1], v[k2] = v[k2], v[k1]
        w = swappers[(k1, k2)]
        conj_local(w, w)

    def canonical_shift(k):
        while v[k] <= -np.pi / 4:
            shift(k, 1)
        while v[k] > np.pi / 4:
            shift(k, -1)

    for k in range(3):
        canonical_shift(k)
    for a, b in ((0, 1), (1, 2), (0, 1)):
        if abs(v[a]) < abs(v[b]):
            swap(a, b)
    if v[0] < 0:
        negate(0, 2)
    if v[1] < 0:
        negate(1, 2)
    canonical_shift(2)
    if v[0] > np.pi / 4 - 1e-12 and v[2] < 0:
        shift(0, -1)
        negate(0, 2)


def kak_decompose(u: np.ndarray, atol: float = 1e-10) -> KakFactors:
    """Cartan KAK decomposition of a 4x4 unitary in the magic basis.

    Returns factors with interaction coefficients in the Weyl chamber
    ``pi/4 >= alpha >= beta >= |gamma|``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4) or not is_unitary(u, atol):
        raise ValueError("kak_decompose needs a 4x4 unitary")
    det_phase = np.angle(np.linalg.det(u)) / 4
    m = MAGIC_DAG @ (u * np.exp(-1j * det_phase)) @ MAGIC  # in SU(4), magic frame
    p = _real_orthogonal_eigenbasis(m.T @ m)
    d2 = np.diag(p.T @ m.T @ m @ p)
    d = np.sqrt(d2)
    o1 = m @ p / d
    if np.linalg.det(o1).real < 0:
        d[0] = -d[0]
        o1 = m @ p / d
    o1 = o1.real
    # m = o1 diag(d) p^T
    k1 = MAGIC @ o1 @ MAGIC_DAG
    k2 = MAGIC @ p.T @ MAGIC_DAG
    alpha, beta, gamma, _ = np.linalg.solve(_ANGLE_SYSTEM, -np.angle(d))
    left = [_to_special(f)[0] for f in _kron_factor(k1)]
    right = [_to_special(f)[0] for f in _kron_factor(k2)]
    v = [float(alpha), float(beta), float(gamma)]
    _canonicalize(v, left, right)
    out = KakFactors(left[0], left[1], right[0], right[1], v[0], v[1], v[2], 0.0)
    # everything else is exact up to a global phase (square-root branches, i XX shifts)
    ref = out.matrix()
    k = np.argmax(np.abs(ref))
    out = KakFactors(left[0], left[1], right[0], right[1], v[0], v[1], v[2], float(np.angle(u.flat[k] / ref.flat[k])))
    err = np.abs(out.matrix() - u).max()
    if err > 1e-9:
        raise ArithmeticError(f"KAK recomposition failed (error {err:.2e})")
    return out


def entangler_netlist(alpha: float, beta: float, gamma: float, qubits: tuple[int, int] = (0, 1)) -> list[Gate]:
    """Three CNOTs and five single-qubit rotations realising ``N(alpha, beta, gamma)``.

    The product equals the entangler up to a constant global phase
    ``exp(i pi/4)``.
    """
    q0, q1 = qubits
    return [
        Gate((q1,), rz(np.pi / 4)),
        Gate((q0, q1), CNOT_10),
        Gate((q0,), rz(gamma - np.pi / 4)),
        Gate((q1,), ry(alpha - np.pi / 4)),
        Gate((q0, q1), CNOT_01),
        Gate((q1,), ry(np.pi / 4 - beta)),
        Gate((q0, q1), CNOT_10),
        Gate((q0,), rz(-np.pi / 4)),
    ]


def netlist_unitary(gates: list[Gate], qubits: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Multiply a two-qubit gate list into a 4x4 matrix (``qubits[0]`` first)."""
    from .qsim import apply_matrix

    u = np.eye(4, dtype=complex)
    remap = {qubits[0]: 0, qubits[1]: 1}
    for g in gates:
        u = apply_matrix(u.T, g.matrix, [remap[q] for q in g.qubits]).T
    return u
