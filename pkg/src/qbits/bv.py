"""Bernstein-Vazirani: classical n-query and quantum one-query solvers.

Register layout: input register on qubits n..1 (input bit j is qubit
j+1), output qubit 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .circuit import Circuit, GateOp, MeasureOp, OracleOp, simulate
from .measurement import RandomSource
from .oracle import BvOracle, default_inputs, dot_mod2
from .state import StateVector, basis_state

__all__ = [
    "BvOracle",
    "all_strategies_ambiguous",
    "candidates",
    "BvResult",
    "bv_circuit",
    "classical_lower_bound",
    "dot_mod2",
    "initial_state",
    "oracle_apply_quantum",
    "oracle_query_classical",
    "solve_classical",
    "solve_quantum",
]


@dataclass(frozen=True)
class BvResult:
    a_found: int
    queries_used: int
    final_amplitude: float | None = None
    n: int | None = None

    @property
    def bits(self) -> str:
        return format(self.a_found, f"0{self.n}b") if self.n else str(self.a_found)


def oracle_apply_quantum(o: BvOracle, s: StateVector) -> StateVector:
    return o.apply_quantum(s)


def oracle_query_classical(o: BvOracle, x: int) -> int:
    return o.query(x)


def bv_circuit(n: int, a: int | None = None, measure: bool = True) -> Circuit:
    """H on every qubit, the oracle, H on every qubit, then read the inputs.

    With ``a=None`` the oracle marker is opaque and must be answered by a
    black box at simulation time.
    """
    layer = [GateOp("H", (q,)) for q in range(n, -1, -1)]
    ops = [*layer, OracleOp(a, default_inputs(n), 0), *layer]
    if measure:
        ops.append(MeasureOp(default_inputs(n)))
    return Circuit(n + 1, tuple(ops))


def initial_state(n: int) -> StateVector:
    """``|0>_n |1>``."""
    return basis_state(1, n + 1)


def solve_classical(o: BvOracle) -> BvResult:
    a = 0
    for j in range(o.n):
        a |= o.query(1 << j) << j
    return BvResult(a, o.query_count, n=o.n)


def solve_quantum(o: BvOracle, rng: RandomSource) -> BvResult:
    """One oracle call; the measured input register reads a.

    ``final_amplitude`` is the magnitude of the input-register component
    that was measured, i.e. the square root of its Born probability.
    """
    c = bv_circuit(o.n)
    _, records = simulate(c, initial_state(o.n), rng, oracle=o)
    rec = records[-1]
    return BvResult(rec.outcome, o.query_count, math.sqrt(rec.probability_at_draw), o.n)


def candidates(n: int, queries: list[int], answers: list[int]) -> list[int]:
    """Every hidden string consistent with the given classical answers."""
    return [
        a for a in range(1 << n)
        if all(dot_mod2(x, a) == b for x, b in zip(queries, answers))
    ]


def classical_lower_bound(n: int, k: int) -> int:
    """Fewest candidates any deterministic k-query strategy can guarantee.

    Enumerates every adaptive strategy (each query may depend on earlier
    answers) and returns the minimum over strategies of the worst-case
    number of strings left consistent. A value >= 2 means no k-query
    strategy pins down every a.
    """
    size = 1 << n

    def worst(queries: list[int], answers: list[int]) -> int:
        live = candidates(n, queries, answers)
        if len(queries) == k or len(live) <= 1:
            return len(live)
        best = size
        for x in range(size):
            branch = max(
                worst(queries + [x], answers + [b])
                for b in (0, 1)
                if any(dot_mod2(x, a) == b for a in live)
            )
            best = min(best, branch)
        return best

    return worst([], [])


def all_strategies_ambiguous(n: int, k: int) -> bool:
    """True if every k-query strategy leaves every a with a rival candidate.

    Brute force over explicit strategy trees (k <= 2): for each tree and each
    hidden string, at least two strings produce the same answers.
    """
    if k > 2:
        raise ValueError("explicit enumeration only for up to two queries")
    size = 1 << n
    xs = range(size)
    if k == 1:
        trees = ((x1, None) for x1 in xs)
    else:
        trees = ((x1, pair) for x1 in xs for pair in itertools.product(xs, repeat=2))
    for x1, follow in trees:
        leaves = {}
        for a in range(size):
            b1 = dot_mod2(x1, a)
            key: tuple = (b1,)
            if follow is not None:
                x2 = follow[b1]
                key = (b1, dot_mod2(x2, a))
            leaves.setdefault(key, []).append(a)
        if min(len(v) for v in leaves.values()) < 2:
            return False
    return True
