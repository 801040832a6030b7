"""Computational-basis measurement.

All sampling goes through an explicit :class:`RandomSource` and uses the
inverse CDF over ascending basis index with exactly one uniform variate per
measurement gate, so outcomes are reproducible from the seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gates import apply, x
from .state import NORM_TOL, StateVector, basis_state, bitstring

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class RandomSource:
    """SplitMix64 generator.

    state <- state + 0x9E3779B97F4A7C15 (mod 2**64), then
    z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9,
    z = (z ^ z >> 27) * 0x94D049BB133111EB,
    z = z ^ z >> 31;
    a uniform in [0, 1) is ``(z >> 11) * 2**-53``.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & _MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniforms(self, count: int) -> np.ndarray:
        """The next ``count`` variates; identical to ``count`` calls of next_uniform."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * _GAMMA) & _MASK64
        return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    bits: str
    probability_at_draw: float
    post_state: StateVector

    def format(self, with_state: bool = False) -> str:
        line = f"outcome={self.bits} p={self.probability_at_draw:.17g}"
        if with_state:
            line += "\n" + self.post_state.dump()
        return line


@dataclass(frozen=True)
class SingleQubitSplit:
    """``s = a0|0>_q|phi0> + a1|1>_q|phi1>``.

    ``phi0``/``phi1`` are ``None`` when the matching amplitude is zero; the
    conditional state is undefined there.
    """

    qubit: int
    a0: float
    a1: float
    phi0: StateVector | None
    phi1: StateVector | None

    def amplitude(self, bit: int) -> float:
        return self.a1 if bit else self.a0

    def phi(self, bit: int) -> StateVector | None:
        return self.phi1 if bit else self.phi0


def _require_normalized(s: StateVector) -> None:
    if abs(s.norm() ** 2 - 1.0) > NORM_TOL:
        raise ValueError("state is not normalized")


def _check_qubit(s: StateVector, q: int) -> None:
    if not 0 <= q < s.n:
        raise ValueError(f"qubit {q} out of range for {s.n} qubits")


def exact_distribution(s: StateVector) -> dict[int, float]:
    """Born probabilities ``|a_x|^2`` of every basis index with nonzero weight."""
    _require_normalized(s)
    p = s.probabilities()
    return {int(x): float(p[x]) for x in np.flatnonzero(p > 0)}


def _inverse_cdf(p: np.ndarray, u: np.ndarray | float) -> np.ndarray | int:
    cdf = np.cumsum(p)
    idx = np.searchsorted(cdf, np.asarray(u) * cdf[-1], side="right")
    # rounding can leave u*total == cdf[-1]; never land past the last live entry
    return np.minimum(idx, int(np.flatnonzero(p)[-1]))


def measure_all(s: StateVector, rng: RandomSource) -> MeasurementRecord:
    _require_normalized(s)
    p = s.probabilities()
    x = int(_inverse_cdf(p, rng.next_uniform()))
    return MeasurementRecord(x, bitstring(x, s.n), float(p[x]), basis_state(x, s.n))


def sample_outcomes(s: StateVector, shots: int, rng: RandomSource) -> np.ndarray:
    """Outcomes of ``shots`` independent measure_all calls on copies of ``s``.

    Consumes the same variates, in the same order, as repeated measure_all.
    """
    _require_normalized(s)
    return _inverse_cdf(s.probabilities(), rng.uniforms(shots)).astype(np.int64)


def _qubit_axis_view(s: StateVector, q: int) -> np.ndarray:
    """Amplitudes as ``(2, 2**(n-1))``: row = bit of qubit q, column = the rest."""
    psi = s.amps.reshape((2,) * s.n)
    return np.moveaxis(psi, s.n - 1 - q, 0).reshape(2, -1)


def split_on_qubit(s: StateVector, q: int) -> SingleQubitSplit:
    _check_qubit(s, q)
    _require_normalized(s)
    rows = _qubit_axis_view(s, q)
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    total = weights.sum()
    a = np.sqrt(weights / total)
    phis = []
    for bit in (0, 1):
        if weights[bit] == 0.0:
            phis.append(None)
        else:
            phis.append(StateVector(rows[bit] / np.sqrt(weights[bit])))
    return SingleQubitSplit(q, float(a[0]), float(a[1]), phis[0], phis[1])


def _reassemble(bit: int, q: int, phi: StateVector, n: int) -> StateVector:
    rest = phi.amps.reshape((2,) * (n - 1))
    full = np.zeros((2,) + rest.shape, dtype=np.complex128)
    full[bit] = rest
    full = np.moveaxis(full, 0, n - 1 - q)
    return StateVector(full.reshape(-1))


def _draw_bit(split: SingleQubitSplit, rng: RandomSource) -> int:
    u = rng.next_uniform()
    if split.phi1 is None:
        return 0
    if split.phi0 is None:
        return 1
    return 0 if u < split.a0**2 else 1


def measure_one(s: StateVector, q: int, rng: RandomSource) -> MeasurementRecord:
    split = split_on_qubit(s, q)
    bit = _draw_bit(split, rng)
    if s.n == 1:
        # nothing stays unmeasured, so the leftover unit scalar is a global phase
        post = basis_state(bit, 1)
    else:
        post = _reassemble(bit, q, split.phi(bit), s.n)
    return MeasurementRecord(bit, str(bit), split.amplitude(bit) ** 2, post)


def measure_qubits(s: StateVector, qubits: Sequence[int], rng: RandomSource) -> MeasurementRecord:
    """Measure ``qubits`` one at a time in the given order.

    The outcome integer reads the bits in the listed order, first listed
    qubit most significant; the probability is the product of conditionals.
    """
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubit in measurement {list(qubits)}")
    outcome, prob = 0, 1.0
    for q in qubits:
        rec = measure_one(s, q, rng)
        outcome = (outcome << 1) | rec.outcome
        prob *= rec.probability_at_draw
        s = rec.post_state
    return MeasurementRecord(outcome, bitstring(outcome, len(qubits)), prob, s)


def measure_all_via_singles(
    s: StateVector, rng: RandomSource, order: Sequence[int] | None = None
) -> MeasurementRecord:
    """Full measurement built from 1-qubit gates, qubit n-1 first by default."""
    order = list(range(s.n - 1, -1, -1)) if order is None else list(order)
    if sorted(order) != list(range(s.n)):
        raise ValueError(f"order {order} is not a permutation of the qubits")
    outcome, prob = 0, 1.0
    for q in order:
        rec = measure_one(s, q, rng)
        outcome |= rec.outcome << q
        prob *= rec.probability_at_draw
        s = rec.post_state
    return MeasurementRecord(outcome, bitstring(outcome, s.n), prob, basis_state(outcome, s.n))


def singles_distribution(s: StateVector, order: Sequence[int] | None = None) -> dict[int, float]:
    """Joint outcome law of measure_all_via_singles, chained analytically from splits."""
    _require_normalized(s)
    order = list(range(s.n - 1, -1, -1)) if order is None else list(order)
    if sorted(order) != list(range(s.n)):
        raise ValueError(f"order {order} is not a permutation of the qubits")
    table: dict[int, float] = {}
    stack = [(s, 0, 1.0, 0)]
    while stack:
        state, outcome, prob, depth = stack.pop()
        if depth == len(order):
            table[outcome] = prob
            continue
        q = order[depth]
        split = split_on_qubit(state, q)
        for bit in (0, 1):
            phi = split.phi(bit)
            if phi is None:
                continue
            post = _reassemble(bit, q, phi, state.n)
            stack.append((post, outcome | bit << q, prob * split.amplitude(bit) ** 2, depth + 1))
    return dict(sorted(table.items()))


def prepare_zero(s: StateVector, rng: RandomSource) -> StateVector:
    """Measure a single qubit and flip it if the gate shows 1."""
    if s.n != 1:
        raise ValueError("prepare_zero acts on a single qubit")
    rec = measure_one(s, 0, rng)
    return apply(x(0), rec.post_state) if rec.outcome == 1 else rec.post_state


def prepare_zero_register(s: StateVector, rng: RandomSource) -> StateVector:
    """Reset every qubit to 0 by measuring each and conditionally flipping it."""
    rec = measure_all_via_singles(s, rng)
    s = rec.post_state
    for q in range(s.n):
        if rec.outcome >> q & 1:
            s = apply(x(q), s)
    return s


def total_variation(p: dict[int, float], q: dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
