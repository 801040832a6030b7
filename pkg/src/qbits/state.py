"""Dense n-qubit pure states.

Qubit ``j`` carries the bit of weight ``2**j`` in the basis index, so the
ket ``|q_{n-1} ... q_1 q_0>`` is printed with qubit ``n-1`` leftmost and
``basis_state(5, 3)`` is ``|101>``.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

NORM_TOL = 1e-10
MAX_QUBITS = 24


class StateVector:
    """Unit vector of ``2**n`` complex amplitudes.

    Instances are treated as values: the amplitude array is made read-only
    and every operation returns a new state.
    """

    __slots__ = ("_amps", "_n")

    def __init__(self, amps: Iterable[complex] | np.ndarray, *, normalize: bool = False):
        arr = np.array(amps, dtype=np.complex128).reshape(-1)
        dim = arr.shape[0]
        n = dim.bit_length() - 1
        if dim == 0 or 1 << n != dim:
            raise ValueError(f"amplitude count {dim} is not a power of two")
        if n > MAX_QUBITS:
            raise ValueError(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(arr))
        if normalize:
            if norm == 0.0:
                raise ValueError("cannot normalize the zero vector")
            arr = arr / norm
        elif abs(norm * norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm * norm!r})")
        arr.setflags(write=False)
        self._amps = arr
        self._n = n

    @property
    def n(self) -> int:
        return self._n

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self._amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, x: int) -> complex:
        return complex(self._amps[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._n == other._n and bool(np.array_equal(self._amps, other._amps))

    def __hash__(self) -> int:
        return hash((self._n, self._amps.tobytes()))

    def __repr__(self) -> str:
        terms = []
        for x in np.flatnonzero(np.abs(self._amps) > 1e-12)[:8]:
            a = self._amps[x]
            terms.append(f"({a.real:.4g}{a.imag:+.4g}j)|{bitstring(int(x), self._n)}>")
        more = " + ..." if np.count_nonzero(np.abs(self._amps) > 1e-12) > 8 else ""
        return f"StateVector(n={self._n}: {' + '.join(terms)}{more})"

    def allclose(self, other: StateVector, tol: float = 1e-12) -> bool:
        return self._n == other._n and float(np.max(np.abs(self._amps - other._amps))) <= tol

    def dump(self) -> str:
        """Tab-separated ``index bitstring re im`` lines, ascending index."""
        lines = []
        for x, a in enumerate(self._amps):
            lines.append(f"{x}\t{bitstring(x, self._n)}\t{a.real:.17g}\t{a.imag:.17g}")
        return "\n".join(lines)

    @classmethod
    def from_dump(cls, text: str) -> StateVector:
        amps = []
        for lineno, line in enumerate(text.strip().splitlines()):
            idx, _bits, re, im = line.split("\t")
            if int(idx) != lineno:
                raise ValueError(f"dump line {lineno + 1}: expected index {lineno}, got {idx}")
            amps.append(complex(float(re), float(im)))
        return cls(amps)


def bitstring(x: int, n: int) -> str:
    """Binary expansion of ``x`` on ``n`` bits, most significant (qubit n-1) first."""
    return format(x, f"0{n}b") if n > 0 else ""


def basis_state(x: int, n: int) -> StateVector:
    if n < 0 or n > MAX_QUBITS:
        raise ValueError(f"qubit count {n} out of range")
    if not 0 <= x < 1 << n:
        raise ValueError(f"basis index {x} out of range for {n} qubits")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(amps)


def zero_state(n: int) -> StateVector:
    return basis_state(0, n)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """``|a>|b>``: the left factor occupies the high-order qubits."""
    return StateVector(np.kron(a.amps, b.amps))


def tensor_all(*states: StateVector) -> StateVector:
    out = basis_state(0, 0)
    for s in states:
        out = tensor(out, s)
    return out


def global_phase(a: StateVector, b: StateVector) -> complex:
    """Unit scalar ``c`` aligning ``b`` to ``a`` at the largest entry of ``b``."""
    k = int(np.argmax(np.abs(b.amps)))
    ratio = a.amps[k] / b.amps[k]
    mag = abs(ratio)
    return complex(ratio / mag) if mag > 0 else 1.0 + 0j


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} vs {b.n}")
    c = global_phase(a, b)
    return float(np.max(np.abs(a.amps - c * b.amps))) <= tol
