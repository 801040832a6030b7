"""Circuit IR, JSON format, simulation and dense equivalence checking.

File format (UTF-8 JSON)::

    {"width": 3,
     "ops": [{"gate": "H", "q": [0]},
             {"gate": "CNOT", "q": [1, 0]},
             {"oracle": "BV", "a": "101", "in": [3, 2, 1], "out": 0},
             {"measure": true, "q": [3, 2, 1]}]}

``q`` for CNOT is ``[control, target]``. ``in`` lists the oracle input
qubits in the same order as the characters of ``a``. ``U`` ops carry
``"matrix"`` as rows of ``[re, im]`` pairs. An oracle with ``"a": null``
is opaque and needs a black box supplied at simulation time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from . import gates as g
from .measurement import MeasurementRecord, RandomSource, measure_qubits
from .oracle import BvOracle, bv_permute
from .state import StateVector, bitstring

MAX_EQUIV_WIDTH = 10
EQUIV_TOL = 1e-9

GATE_ARITY = {"X": 1, "Z": 1, "Y": 1, "YH": 1, "H": 1, "I": 1, "CNOT": 2, "CZ": 2, "SWAP": 2}


class CircuitFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class GateOp:
    name: str
    qubits: tuple[int, ...]
    matrix: tuple[tuple[complex, ...], ...] | None = None

    def __post_init__(self):
        if self.name == "U":
            if self.matrix is None:
                raise CircuitFormatError("U op needs a matrix")
        elif self.name not in GATE_ARITY:
            raise CircuitFormatError(f"unknown gate {self.name!r}")
        elif len(self.qubits) != GATE_ARITY[self.name]:
            raise CircuitFormatError(
                f"{self.name} takes {GATE_ARITY[self.name]} qubit(s), got {list(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitFormatError(f"duplicate qubit ids in {self.name} {list(self.qubits)}")

    def to_gate(self) -> g.Gate:
        q = self.qubits
        if self.name == "CNOT":
            return g.cnot(*q)
        if self.name == "CZ":
            return g.cz(*q)
        if self.name == "SWAP":
            return g.swap(*q)
        if self.name == "U":
            return g.Gate("U", q, matrix=self.matrix)
        return g.Gate(self.name, q)

    def __str__(self) -> str:
        return f"{self.name} {' '.join(map(str, self.qubits))}"


@dataclass(frozen=True)
class OracleOp:
    a: int | None
    inputs: tuple[int, ...]
    output: int
    kind: str = "BV"

    def __post_init__(self):
        if self.kind != "BV":
            raise CircuitFormatError(f"unknown oracle kind {self.kind!r}")
        if not self.inputs:
            raise CircuitFormatError("oracle needs at least one input qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitFormatError(f"duplicate qubit ids in oracle {list(self.qubits)}")
        if self.a is not None and not 0 <= self.a < 1 << len(self.inputs):
            raise CircuitFormatError(f"hidden string {self.a} wider than {len(self.inputs)} bits")

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.inputs, self.output)

    @property
    def bits(self) -> str | None:
        return None if self.a is None else bitstring(self.a, self.n)

    def __str__(self) -> str:
        return f"U_a[{self.bits or '?'}] in={list(self.inputs)} out={self.output}"


@dataclass(frozen=True)
class MeasureOp:
    qubits: tuple[int, ...]

    def __post_init__(self):
        if not self.qubits:
            raise CircuitFormatError("measurement needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitFormatError(f"duplicate qubit ids in measurement {list(self.qubits)}")

    def __str__(self) -> str:
        return f"MEASURE {' '.join(map(str, self.qubits))}"


Op = Union[GateOp, OracleOp, MeasureOp]


@dataclass(frozen=True)
class Circuit:
    width: int
    ops: tuple[Op, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.width < 1:
            raise CircuitFormatError("circuit width must be positive")
        seen_measure = False
        for i, op in enumerate(self.ops):
            bad = [q for q in op.qubits if not 0 <= q < self.width]
            if bad:
                raise CircuitFormatError(f"op {i} ({op}) uses qubits {bad} outside width {self.width}")
            if isinstance(op, MeasureOp):
                seen_measure = True
            elif seen_measure:
                raise CircuitFormatError(f"op {i} ({op}) follows a measurement")

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def unitary_ops(self) -> tuple[Op, ...]:
        return tuple(op for op in self.ops if not isinstance(op, MeasureOp))

    @property
    def has_measurement(self) -> bool:
        return any(isinstance(op, MeasureOp) for op in self.ops)

    def with_ops(self, ops: Sequence[Op]) -> Circuit:
        return Circuit(self.width, tuple(ops))


# -- serialization ---------------------------------------------------------


def _op_to_json(op: Op) -> dict[str, Any]:
    if isinstance(op, GateOp):
        d: dict[str, Any] = {"gate": op.name, "q": list(op.qubits)}
        if op.matrix is not None:
            d["matrix"] = [[[v.real, v.imag] for v in row] for row in op.matrix]
        return d
    if isinstance(op, OracleOp):
        return {"oracle": op.kind, "a": op.bits, "in": list(op.inputs), "out": op.output}
    return {"measure": True, "q": list(op.qubits)}


def to_dict(c: Circuit) -> dict[str, Any]:
    return {"width": c.width, "ops": [_op_to_json(op) for op in c.ops]}


def serialize(c: Circuit) -> str:
    """Canonical text: one op per line."""
    if not c.ops:
        return f'{{"width": {c.width}, "ops": []}}\n'
    body = ",\n".join("    " + json.dumps(_op_to_json(op)) for op in c.ops)
    return f'{{"width": {c.width}, "ops": [\n{body}\n]}}\n'


def _int_list(value: Any, what: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise CircuitFormatError(f"{what} must be a list of integers, got {value!r}")
    return tuple(value)


def _op_from_json(d: Any, index: int) -> Op:
    if not isinstance(d, dict):
        raise CircuitFormatError(f"op {index} is not an object")
    try:
        if "gate" in d:
            name = d["gate"]
            if not isinstance(name, str):
                raise CircuitFormatError(f"gate name must be a string, got {name!r}")
            if name not in GATE_ARITY and name != "U":
                raise CircuitFormatError(f"unknown gate {name!r}")
            matrix = None
            if name == "U":
                if "matrix" not in d:
                    raise CircuitFormatError("U op needs a matrix")
                arr = np.array(d["matrix"], dtype=np.float64)
                if arr.ndim != 3 or arr.shape[2] != 2:
                    raise CircuitFormatError("matrix must be rows of [re, im] pairs")
                matrix = g._freeze(arr[..., 0] + 1j * arr[..., 1])
            op = GateOp(name, _int_list(d.get("q"), "q"), matrix)
            if matrix is not None:
                op.to_gate()  # unitarity and shape check
            return op
        if "oracle" in d:
            bits = d.get("a")
            inputs = _int_list(d.get("in"), "in")
            if bits is None:
                a = None
            elif isinstance(bits, str) and bits and not set(bits) - {"0", "1"}:
                if len(bits) != len(inputs):
                    raise CircuitFormatError(f"a={bits!r} has {len(bits)} bits for {len(inputs)} inputs")
                a = int(bits, 2)
            else:
                raise CircuitFormatError(f"malformed oracle string {bits!r}")
            out = d.get("out")
            if not isinstance(out, int) or isinstance(out, bool):
                raise CircuitFormatError(f"oracle out must be an integer, got {out!r}")
            return OracleOp(a, inputs, out, d["oracle"])
        if "measure" in d:
            return MeasureOp(_int_list(d.get("q"), "q"))
    except CircuitFormatError as exc:
        raise CircuitFormatError(f"op {index}: {exc}") from None
    except ValueError as exc:
        raise CircuitFormatError(f"op {index}: {exc}") from None
    raise CircuitFormatError(f"op {index} has none of gate/oracle/measure")


def from_dict(d: Any) -> Circuit:
    if not isinstance(d, dict) or "width" not in d or "ops" not in d:
        raise CircuitFormatError("circuit must be an object with width and ops")
    width = d["width"]
    if not isinstance(width, int) or isinstance(width, bool):
        raise CircuitFormatError(f"width must be an integer, got {width!r}")
    if not isinstance(d["ops"], list):
        raise CircuitFormatError("ops must be a list")
    return Circuit(width, tuple(_op_from_json(op, i) for i, op in enumerate(d["ops"])))


def parse(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    return from_dict(doc)


def load(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- simulation ------------------------------------------------------------


def _oracle_array(op: OracleOp, arr: np.ndarray, oracle: BvOracle | None) -> np.ndarray:
    if oracle is not None:
        return oracle.apply_to(arr, op.inputs, op.output)
    if op.a is None:
        raise ValueError("opaque oracle marker needs a black box to simulate")
    return BvOracle(op.a, op.n).apply_to(arr, op.inputs, op.output)


def apply_unitary_ops(
    ops: Sequence[Op], arr: np.ndarray, width: int, oracle: BvOracle | None = None
) -> np.ndarray:
    for op in ops:
        if isinstance(op, GateOp):
            arr = g.apply_to_array(op.to_gate(), arr, width)
        elif isinstance(op, OracleOp):
            arr = _oracle_array(op, arr, oracle)
        else:
            raise ValueError("measurement inside a unitary section")
    return arr


def simulate(
    c: Circuit,
    initial: StateVector,
    rng: RandomSource,
    oracle: BvOracle | None = None,
) -> tuple[StateVector, list[MeasurementRecord]]:
    """Run ``c`` on ``initial``; ``oracle`` answers every oracle marker if given."""
    if initial.n != c.width:
        raise ValueError(f"initial state has {initial.n} qubits, circuit width is {c.width}")
    records: list[MeasurementRecord] = []
    arr = initial.amps
    state = initial
    for op in c.ops:
        if isinstance(op, MeasureOp):
            if arr is not None:
                state = StateVector(arr)
                arr = None
            rec = measure_qubits(state, op.qubits, rng)
            records.append(rec)
            state = rec.post_state
        else:
            arr = apply_unitary_ops((op,), arr, c.width, oracle)
    if arr is not None:
        state = StateVector(arr)
    return state, records


def circuit_unitary(c: Circuit) -> np.ndarray:
    if c.has_measurement:
        raise ValueError("circuit contains measurements")
    if c.width > MAX_EQUIV_WIDTH:
        raise ValueError(f"width {c.width} exceeds dense limit {MAX_EQUIV_WIDTH}")
    return apply_unitary_ops(c.ops, np.eye(1 << c.width, dtype=np.complex128), c.width)


def phase_aligned_deviation(m1: np.ndarray, m2: np.ndarray) -> float:
    """Max entrywise gap after fixing one global phase at the largest entry of ``m2``."""
    k = np.unravel_index(np.argmax(np.abs(m2)), m2.shape)
    ratio = m1[k] / m2[k]
    phase = ratio / abs(ratio) if abs(ratio) > 0 else 1.0
    return float(np.max(np.abs(m1 - phase * m2)))


def unitary_deviation(c1: Circuit, c2: Circuit) -> float:
    if c1.width != c2.width:
        raise ValueError(f"widths differ: {c1.width} vs {c2.width}")
    return phase_aligned_deviation(circuit_unitary(c1), circuit_unitary(c2))


def equivalence_check(c1: Circuit, c2: Circuit, tol: float = EQUIV_TOL) -> bool:
    return unitary_deviation(c1, c2) <= tol


# -- rendering -------------------------------------------------------------


def render(c: Circuit) -> str:
    """ASCII diagram, qubit ``width-1`` on top, time left to right."""
    rows = {q: [] for q in range(c.width)}
    for op in c.ops:
        cells: dict[int, str] = {}
        if isinstance(op, GateOp):
            if op.name == "CNOT":
                cells = {op.qubits[0]: "@", op.qubits[1]: "(+)"}
            elif op.name == "CZ":
                cells = {op.qubits[0]: "@", op.qubits[1]: "@"}
            elif op.name == "SWAP":
                cells = {q: "x" for q in op.qubits}
            else:
                cells = {q: op.name for q in op.qubits}
        elif isinstance(op, OracleOp):
            cells = {q: "Ua" for q in op.inputs}
            cells[op.output] = "Ua+"
        else:
            cells = {q: "M" for q in op.qubits}
        span = range(min(cells), max(cells) + 1) if len(cells) > 1 else ()
        for q in range(c.width):
            if q in cells:
                rows[q].append(f"{cells[q]:-^5}")
            elif q in span:
                rows[q].append("--|--")
            else:
                rows[q].append("-----")
    label = len(str(c.width - 1))
    return "\n".join(
        f"q{q:<{label}}: -{''.join(rows[q])}-" for q in range(c.width - 1, -1, -1)
    )
