"""Gate algebra: Paulis, Hadamard, controlled gates, SWAP and checked unitaries.

A multi-qubit matrix acts on its ``targets`` with the first target as the
most significant bit of the matrix index, so ``cnot(c, t)`` has the usual
``[[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]`` form on ``(c, t)``.
One-qubit kinds given several targets act as a layer, one copy per target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .state import StateVector

UNITARY_TOL = 1e-10
MAX_DENSE_QUBITS = 12

_SQRT_HALF = 1 / np.sqrt(2)

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
# Y = XZ is real; the hermitian convention carries an extra factor of i.
Y_REAL = X @ Z
Y_HERMITIAN = 1j * (X @ Z)
H = _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=np.complex128)

ONE_QUBIT_MATRICES = {"X": X, "Z": Z, "Y": Y_REAL, "YH": Y_HERMITIAN, "H": H, "I": I2}

for _m in ONE_QUBIT_MATRICES.values():
    _m.setflags(write=False)


def _freeze(matrix: np.ndarray) -> tuple[tuple[complex, ...], ...]:
    return tuple(tuple(complex(v) for v in row) for row in matrix)


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


@dataclass(frozen=True)
class Gate:
    """Immutable description of a circuit element.

    ``kind`` is one of ``X Z Y YH H I C SWAP U``; ``C`` wraps a one-qubit
    ``inner`` gate with a ``control`` qubit, ``U`` carries an explicit matrix.
    """

    kind: str
    targets: tuple[int, ...]
    control: int | None = None
    inner: Gate | None = None
    matrix: tuple[tuple[complex, ...], ...] | None = None

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} gate has repeated qubit ids {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit id in {self.qubits}")
        if not self.targets:
            raise ValueError(f"{self.kind} gate needs at least one target")
        if self.kind in ONE_QUBIT_MATRICES:
            return
        if self.kind == "C":
            if self.control is None or self.inner is None:
                raise ValueError("controlled gate needs a control and an inner gate")
            if len(self.targets) != 1 or self.inner.targets != self.targets:
                raise ValueError("controlled gate supports a single target shared with its inner gate")
            if self.inner.kind not in ONE_QUBIT_MATRICES and not (
                self.inner.kind == "U" and len(self.inner.targets) == 1
            ):
                raise ValueError("controlled gate inner must be a 1-qubit gate")
        elif self.kind == "SWAP":
            if len(self.targets) != 2:
                raise ValueError("SWAP acts on exactly two qubits")
        elif self.kind == "U":
            if self.matrix is None:
                raise ValueError("U gate needs a matrix")
            m = np.array(self.matrix, dtype=np.complex128)
            if m.shape != (1 << len(self.targets),) * 2:
                raise ValueError(f"matrix shape {m.shape} does not fit {len(self.targets)} targets")
            if not is_unitary(m):
                raise ValueError("matrix is not unitary within 1e-10")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets if self.control is None else (self.control, *self.targets)

    def local_matrix(self) -> np.ndarray:
        """Matrix on ``self.qubits`` (per-target matrix for one-qubit layers)."""
        if self.kind in ONE_QUBIT_MATRICES:
            return ONE_QUBIT_MATRICES[self.kind]
        if self.kind == "C":
            m = np.eye(4, dtype=np.complex128)
            m[2:, 2:] = self.inner.local_matrix()
            return m
        if self.kind == "SWAP":
            return SWAP_MATRIX
        return np.array(self.matrix, dtype=np.complex128)


def x(*targets: int) -> Gate:
    return Gate("X", tuple(targets))


def z(*targets: int) -> Gate:
    return Gate("Z", tuple(targets))


def y(*targets: int) -> Gate:
    """Real ``Y = XZ``."""
    return Gate("Y", tuple(targets))


def yh(*targets: int) -> Gate:
    """Hermitian ``Y = iXZ``."""
    return Gate("YH", tuple(targets))


def h(*targets: int) -> Gate:
    return Gate("H", tuple(targets))


def identity(*targets: int) -> Gate:
    return Gate("I", tuple(targets))


def hadamard_all(n: int) -> Gate:
    if n < 1:
        raise ValueError("hadamard_all needs at least one qubit")
    return Gate("H", tuple(range(n)))


def controlled(inner: Gate, control: int) -> Gate:
    return Gate("C", inner.targets, control=control, inner=inner)


def cnot(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("cnot control and target must differ")
    return controlled(x(target), control)


def cz(q1: int, q2: int) -> Gate:
    if q1 == q2:
        raise ValueError("cz qubits must differ")
    return controlled(z(q2), q1)


def swap(q1: int, q2: int) -> Gate:
    return Gate("SWAP", (q1, q2))


def unitary(matrix: Sequence[Sequence[complex]] | np.ndarray, targets: Sequence[int]) -> Gate:
    return Gate("U", tuple(targets), matrix=_freeze(np.asarray(matrix, dtype=np.complex128)))


SWAP_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
SWAP_MATRIX.setflags(write=False)


def apply_matrix(arr: np.ndarray, n: int, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply a ``2^k x 2^k`` matrix to ``targets`` of ``arr``.

    ``arr`` has shape ``(2**n, ...)``; trailing axes are a batch of column
    vectors and are carried through untouched.
    """
    k = len(targets)
    batch = arr.shape[1:]
    psi = arr.reshape((2,) * n + batch)
    axes = [n - 1 - t for t in targets]
    u = np.asarray(matrix).reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(arr.shape)


def _check_width(g: Gate, n: int) -> None:
    bad = [q for q in g.qubits if q >= n]
    if bad:
        raise ValueError(f"qubit ids {bad} out of range for {n} qubits")


def apply_to_array(g: Gate, arr: np.ndarray, n: int) -> np.ndarray:
    _check_width(g, n)
    if g.kind in ONE_QUBIT_MATRICES:
        if g.kind == "I":
            return arr.copy()
        m = ONE_QUBIT_MATRICES[g.kind]
        for t in g.targets:
            arr = apply_matrix(arr, n, m, (t,))
        return arr
    return apply_matrix(arr, n, g.local_matrix(), g.qubits)


def apply(g: Gate, s: StateVector) -> StateVector:
    return StateVector(apply_to_array(g, s.amps, s.n))


def apply_all(gates: Sequence[Gate], s: StateVector) -> StateVector:
    arr = s.amps
    for g in gates:
        arr = apply_to_array(g, arr, s.n)
    return StateVector(arr)


def matrix_of(g: Gate, n: int) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix of ``g`` embedded in ``n`` qubits (n <= 12)."""
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense matrices limited to {MAX_DENSE_QUBITS} qubits, got {n}")
    return apply_to_array(g, np.eye(1 << n, dtype=np.complex128), n)


def sequence_matrix(gates: Sequence[Gate], n: int) -> np.ndarray:
    """Matrix of ``gates`` applied left to right (first gate acts first)."""
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense matrices limited to {MAX_DENSE_QUBITS} qubits, got {n}")
    arr = np.eye(1 << n, dtype=np.complex128)
    for g in gates:
        arr = apply_to_array(g, arr, n)
    return arr


def swap_via_paulis(hermitian: bool = False) -> np.ndarray:
    """Exchange operator assembled from Pauli tensor products.

    With the real ``Y = XZ`` the sign of the ``Y(x)Y`` term is negative;
    with the hermitian ``Y = iXZ`` all four terms enter with ``+``.
    """
    one = np.eye(4, dtype=np.complex128)
    zz = np.kron(Z, Z)
    xx = np.kron(X, X)
    if hermitian:
        return 0.5 * (one + xx + np.kron(Y_HERMITIAN, Y_HERMITIAN) + zz)
    return 0.5 * (one + zz + xx - np.kron(Y_REAL, Y_REAL))


def pauli_projectors() -> tuple[np.ndarray, np.ndarray]:
    """``(1 + Z(x)Z)/2`` onto ``|00>,|11>`` and ``(1 - Z(x)Z)/2`` onto ``|01>,|10>``."""
    one = np.eye(4, dtype=np.complex128)
    zz = np.kron(Z, Z)
    return 0.5 * (one + zz), 0.5 * (one - zz)


def is_projector(p: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(
        np.max(np.abs(p @ p - p)) <= tol and np.max(np.abs(p.conj().T - p)) <= tol
    )
