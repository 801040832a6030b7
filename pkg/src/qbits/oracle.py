"""The Bernstein-Vazirani black box ``|x>|y> -> |x>|y + x.a mod 2>``."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .state import StateVector


def dot_mod2(x: int, a: int) -> int:
    """Bitwise inner product mod 2."""
    return (x & a).bit_count() & 1


def default_inputs(n: int) -> tuple[int, ...]:
    """Input register on qubits n..1 listed from the bit of a_{n-1} down to a_0."""
    return tuple(range(n, 0, -1))


def bv_permute(arr: np.ndarray, a: int, inputs: Sequence[int], output: int) -> np.ndarray:
    """Apply the oracle as a permutation of basis indices.

    ``inputs[i]`` holds bit ``n-1-i`` of x, so ``inputs`` reads like the
    bitstring of ``a``. Trailing axes of ``arr`` are batch axes.
    """
    n_in = len(inputs)
    idx = np.arange(arr.shape[0], dtype=np.int64)
    parity = np.zeros_like(idx)
    for i, q in enumerate(inputs):
        if (a >> (n_in - 1 - i)) & 1:
            parity ^= (idx >> q) & 1
    dest = idx ^ (parity << output)
    out = np.empty_like(arr)
    out[dest] = arr
    return out


class BvOracle:
    """Query-counted black box hiding an n-bit string.

    Solvers see only :meth:`apply_quantum`, :meth:`apply_to` and
    :meth:`query`; every call counts as one invocation. The hidden string is
    reachable through :meth:`reveal_unsafe`, which exists for derivation
    tooling and records each read in ``unsafe_reads``.
    """

    def __init__(self, a: int, n: int):
        if n < 1:
            raise ValueError("oracle needs at least one input qubit")
        if not 0 <= a < 1 << n:
            raise ValueError(f"hidden string {a} does not fit in {n} bits")
        self.__a = a
        self.n = n
        self.query_count = 0
        self.unsafe_reads = 0

    @classmethod
    def from_bits(cls, bits: str) -> BvOracle:
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"malformed bitstring {bits!r}")
        return cls(int(bits, 2), len(bits))

    def reveal_unsafe(self) -> int:
        self.unsafe_reads += 1
        return self.__a

    def query(self, x: int) -> int:
        if not 0 <= x < 1 << self.n:
            raise ValueError(f"query {x} does not fit in {self.n} bits")
        self.query_count += 1
        return dot_mod2(x, self.__a)

    def apply_to(
        self, arr: np.ndarray, inputs: Sequence[int], output: int
    ) -> np.ndarray:
        if len(inputs) != self.n:
            raise ValueError(f"oracle takes {self.n} input qubits, got {len(inputs)}")
        self.query_count += 1
        return bv_permute(arr, self.__a, inputs, output)

    def apply_quantum(self, s: StateVector) -> StateVector:
        if s.n != self.n + 1:
            raise ValueError(f"oracle acts on {self.n + 1} qubits, state has {s.n}")
        return StateVector(self.apply_to(s.amps, default_inputs(self.n), 0))
