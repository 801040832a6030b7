"""Desk-scale state-vector simulation, circuit identities and Bernstein-Vazirani."""

from .bv import BvResult, bv_circuit, solve_classical, solve_quantum
from .circuit import Circuit, GateOp, MeasureOp, OracleOp, equivalence_check, parse, serialize, simulate
from .gates import Gate, apply, matrix_of
from .measurement import MeasurementRecord, RandomSource, measure_all, measure_one
from .oracle import BvOracle, dot_mod2
from .rewrite import RULES, bv_simplify, expand_oracle, rewrite_step
from .state import StateVector, basis_state, equal_up_to_global_phase, tensor

__all__ = [
    "BvOracle", "BvResult", "Circuit", "Gate", "GateOp", "MeasureOp", "MeasurementRecord",
    "OracleOp", "RULES", "RandomSource", "StateVector", "apply", "basis_state", "bv_circuit",
    "bv_simplify", "dot_mod2", "equal_up_to_global_phase", "equivalence_check", "expand_oracle",
    "matrix_of", "measure_all", "measure_one", "parse", "rewrite_step", "serialize", "simulate",
    "solve_classical", "solve_quantum", "tensor",
]
