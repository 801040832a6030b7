import numpy as np
import pytest

from conftest import random_state
from qbits.bv import (
    BvOracle, all_strategies_ambiguous, bv_circuit, candidates, classical_lower_bound,
    initial_state, oracle_apply_quantum, oracle_query_classical, solve_classical, solve_quantum,
)
from qbits.circuit import Circuit, apply_unitary_ops, circuit_unitary
from qbits.measurement import RandomSource
from qbits.oracle import bv_permute, default_inputs, dot_mod2
from qbits.rewrite import expand_oracle
from qbits.state import StateVector, basis_state, tensor


def dot_by_strings(x, a, n):
    return sum(int(p) * int(q) for p, q in zip(format(x, f"0{n}b"), format(a, f"0{n}b"))) % 2


def oracle_matrix_brute(a, n):
    dim = 1 << (n + 1)
    m = np.zeros((dim, dim))
    for x in range(1 << n):
        for y in (0, 1):
            m[(x << 1) | (y ^ dot_by_strings(x, a, n)), (x << 1) | y] = 1
    return m


def test_dot_mod2_examples():
    assert dot_mod2(0b01000, 0b11010) == 1
    assert dot_mod2(0b11010, 0b11010) == 1
    assert all(dot_mod2(x, 0) == 0 for x in range(64))


def test_dot_mod2_matches_string_oracle():
    for x in range(64):
        for a in range(64):
            assert dot_mod2(x, a) == dot_by_strings(x, a, 6)


def test_oracle_quantum_flips_output():
    o = BvOracle(0b11010, 5)
    x = 0b01000
    out = oracle_apply_quantum(o, basis_state(x << 1, 6))
    assert out == basis_state(x << 1 | 1, 6)
    assert o.query_count == 1


def test_oracle_zero_is_identity(nprng):
    o = BvOracle(0, 3)
    s = random_state(nprng, 4)
    assert o.apply_quantum(s) == s


def test_oracle_is_involution(nprng):
    o = BvOracle(0b1011, 4)
    s = random_state(nprng, 5)
    assert o.apply_quantum(o.apply_quantum(s)) == s
    assert o.query_count == 2


def test_oracle_width_mismatch():
    with pytest.raises(ValueError):
        BvOracle(1, 2).apply_quantum(basis_state(0, 2))
    with pytest.raises(ValueError):
        BvOracle(4, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_oracle_matrix_matches_brute_force(n):
    for a in range(1 << n):
        o = BvOracle(a, n)
        m = o.apply_to(np.eye(1 << (n + 1), dtype=complex), default_inputs(n), 0)
        assert np.array_equal(m, oracle_matrix_brute(a, n))


def test_classical_queries():
    o = BvOracle(0b11010, 5)
    assert [oracle_query_classical(o, 1 << j) for j in range(5)] == [0, 1, 0, 1, 1]
    assert o.query(0) == 0
    assert o.query(0b11111) == 1  # parity of 11010
    assert o.query_count == 7


def test_solve_classical_examples():
    res = solve_classical(BvOracle(0b11010, 5))
    assert (res.a_found, res.queries_used, res.bits) == (0b11010, 5, "11010")
    assert solve_classical(BvOracle(1, 1)).queries_used == 1


def test_candidates():
    assert candidates(3, [], []) == list(range(8))
    assert candidates(3, [1, 2, 4], [1, 0, 1]) == [0b101]


def test_two_queries_never_suffice_for_three_bits():
    assert all_strategies_ambiguous(3, 2)
    assert all_strategies_ambiguous(3, 1)
    assert classical_lower_bound(3, 2) >= 2
    assert classical_lower_bound(3, 3) == 1
    assert classical_lower_bound(2, 2) == 1


def test_solve_quantum_examples():
    o = BvOracle(0b11010, 5)
    res = solve_quantum(o, RandomSource(0))
    assert (res.a_found, res.queries_used) == (0b11010, 1)
    assert res.final_amplitude == pytest.approx(1.0, abs=1e-9)
    res = solve_quantum(BvOracle(0, 5), RandomSource(0))
    assert (res.a_found, res.queries_used) == (0, 1)


def test_solve_quantum_does_not_peek():
    o = BvOracle(0b1101, 4)
    solve_quantum(o, RandomSource(3))
    assert o.unsafe_reads == 0

    class SealedOracle:
        """Answers quantum queries but has no way to reveal its string."""

        def __init__(self, a, n):
            self._inner = BvOracle(a, n)
            self.n = n

        @property
        def query_count(self):
            return self._inner.query_count

        def apply_to(self, arr, inputs, output):
            return self._inner.apply_to(arr, inputs, output)

    sealed = SealedOracle(0b0110, 4)
    res = solve_quantum(sealed, RandomSource(0))
    assert (res.a_found, res.queries_used) == (0b0110, 1)


def test_reveal_unsafe_is_counted():
    o = BvOracle(5, 3)
    assert o.reveal_unsafe() == 5 and o.unsafe_reads == 1
    assert not hasattr(o, "a")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_phase_kickback(n):
    minus = StateVector([1 / np.sqrt(2), -1 / np.sqrt(2)])
    for a in range(1 << n):
        for x in range(1 << n):
            s = tensor(basis_state(x, n), minus)
            out = BvOracle(a, n).apply_quantum(s)
            assert np.allclose(out.amps, (-1) ** dot_mod2(x, a) * s.amps, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_equals_cnot_bank(n):
    for a in range(1 << n):
        marker = bv_circuit(n, a, measure=False).ops[n + 1]
        c = Circuit(n + 1, (marker,))
        assert np.array_equal(circuit_unitary(expand_oracle(c)), oracle_matrix_brute(a, n))


def test_interference_state_before_measurement():
    n, a = 4, 0b1001
    c = bv_circuit(n, a, measure=False)
    arr = apply_unitary_ops(c.ops, initial_state(n).amps, n + 1)
    assert np.allclose(arr, basis_state(a << 1 | 1, n + 1).amps, atol=1e-12)


def test_bv_circuit_layout():
    c = bv_circuit(3, 0b101)
    assert c.width == 4
    assert c.ops[4].inputs == (3, 2, 1) and c.ops[4].output == 0
    assert c.ops[-1].qubits == (3, 2, 1)
    assert bv_permute(np.eye(16), 0b101, (3, 2, 1), 0).shape == (16, 16)


@pytest.mark.parametrize("n", [7, 8, 9, 10])
def test_one_query_sampled_wide(n, nprng):
    for a in [0, (1 << n) - 1, *map(int, nprng.integers(0, 1 << n, size=8))]:
        o = BvOracle(a, n)
        res = solve_quantum(o, RandomSource(a))
        assert (res.a_found, o.query_count) == (a, 1)
        assert res.final_amplitude == pytest.approx(1.0, abs=1e-9)
