"""Peephole rewriting over contiguous op windows.

Every rule carries a ``template`` that builds a concrete matching window
from a qubit assignment, so soundness can be certified by comparing dense
unitaries of window and replacement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .circuit import Circuit, GateOp, MeasureOp, Op, OracleOp

LOCAL_CONJUGATION = "local-conjugation"
ENTANGLING_CONJUGATION = "entangling-conjugation"


class RewriteError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """A window pattern and its replacement.

    ``match`` gets exactly ``window`` ops and returns the replacement or
    ``None``. ``template(qubits)`` returns a window that ``match`` accepts;
    ``arity`` is the number of distinct qubits the template needs.
    """

    name: str
    window: int
    arity: int
    match: Callable[[Sequence[Op]], list[Op] | None]
    template: Callable[[Sequence[int]], list[Op]]
    locality_class: str | None = None
    conjugating_arity: int | None = None


def _is(op: Op, name: str, *qubits: int) -> bool:
    return isinstance(op, GateOp) and op.name == name and (not qubits or op.qubits == qubits)


def _H(q: int) -> GateOp:
    return GateOp("H", (q,))


def _cnot(c: int, t: int) -> GateOp:
    return GateOp("CNOT", (c, t))


def _match_hh(w):
    if _is(w[0], "H") and _is(w[1], "H", *w[0].qubits):
        return []
    return None


def _conj_1q(outer: str, inner: str, result: str):
    def match(w):
        if _is(w[0], outer) and _is(w[1], inner, *w[0].qubits) and _is(w[2], outer, *w[0].qubits):
            return [GateOp(result, w[0].qubits)]
        return None

    return match


def _h_pair_on(ops: Sequence[Op], qubits: set[int]) -> bool:
    return all(_is(op, "H") for op in ops) and {op.qubits[0] for op in ops} == qubits


def _match_conjugate_cnot(w):
    mid = w[2]
    if not _is(mid, "CNOT"):
        return None
    pair = set(mid.qubits)
    if _h_pair_on(w[:2], pair) and _h_pair_on(w[3:], pair):
        c, t = mid.qubits
        return [_cnot(t, c)]
    return None


def _match_cz_symmetry(w):
    if _is(w[0], "CZ"):
        a, b = w[0].qubits
        return [GateOp("CZ", (b, a))]
    return None


def _match_swap_conjugation(w):
    s1, mid, s2 = w
    if _is(s1, "SWAP") and _is(s2, "SWAP") and _is(mid, "CNOT"):
        if set(s1.qubits) == set(s2.qubits) == set(mid.qubits):
            c, t = mid.qubits
            return [_cnot(t, c)]
    return None


def _match_commute(w):
    a, b = w
    if isinstance(a, MeasureOp) or isinstance(b, MeasureOp):
        return None
    if set(a.qubits) & set(b.qubits):
        return None
    return [b, a]


def _match_expand(w):
    op = w[0]
    if isinstance(op, OracleOp) and op.a is not None:
        return oracle_cnots(op)
    return None


HH_CANCEL = RewriteRule(
    "hh_cancel", 2, 1, _match_hh, lambda q: [_H(q[0]), _H(q[0])]
)
HXH_TO_Z = RewriteRule(
    "hxh_to_z", 3, 1, _conj_1q("H", "X", "Z"),
    lambda q: [_H(q[0]), GateOp("X", (q[0],)), _H(q[0])],
    LOCAL_CONJUGATION, 1,
)
HZH_TO_X = RewriteRule(
    "hzh_to_x", 3, 1, _conj_1q("H", "Z", "X"),
    lambda q: [_H(q[0]), GateOp("Z", (q[0],)), _H(q[0])],
    LOCAL_CONJUGATION, 1,
)
CONJUGATE_CNOT = RewriteRule(
    "conjugate_cnot", 5, 2, _match_conjugate_cnot,
    lambda q: [_H(q[0]), _H(q[1]), _cnot(q[0], q[1]), _H(q[0]), _H(q[1])],
    LOCAL_CONJUGATION, 1,
)
CZ_SYMMETRY = RewriteRule(
    "cz_symmetry", 1, 2, _match_cz_symmetry, lambda q: [GateOp("CZ", (q[0], q[1]))]
)
SWAP_CONJUGATION = RewriteRule(
    "swap_conjugation", 3, 2, _match_swap_conjugation,
    lambda q: [GateOp("SWAP", (q[0], q[1])), _cnot(q[0], q[1]), GateOp("SWAP", (q[0], q[1]))],
    ENTANGLING_CONJUGATION, 2,
)
COMMUTE_DISJOINT = RewriteRule(
    "commute_disjoint", 2, 3, _match_commute,
    lambda q: [_H(q[0]), _cnot(q[1], q[2])],
)
EXPAND_ORACLE = RewriteRule(
    "expand_oracle", 1, 3, _match_expand,
    lambda q: [OracleOp(0b11, (q[0], q[1]), q[2])],
)


def hh_insert(q: int) -> RewriteRule:
    """Insert ``H q; H q`` (an identity) at the position it is applied to."""
    return RewriteRule("hh_insert", 0, 1, lambda w: [_H(q), _H(q)], lambda _q: [])


RULES: dict[str, RewriteRule] = {
    r.name: r
    for r in (
        HH_CANCEL, HXH_TO_Z, HZH_TO_X, CONJUGATE_CNOT, CZ_SYMMETRY,
        SWAP_CONJUGATION, COMMUTE_DISJOINT, EXPAND_ORACLE,
    )
}


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    position: int
    before_len: int
    after_len: int

    def to_json(self) -> str:
        return json.dumps(
            {"rule": self.rule, "position": self.position,
             "before_len": self.before_len, "after_len": self.after_len}
        )


def rewrite_step(c: Circuit, rule: RewriteRule, position: int) -> Circuit:
    if not 0 <= position <= len(c.ops) - rule.window:
        raise RewriteError(f"{rule.name}: position {position} out of range")
    window = c.ops[position:position + rule.window]
    if any(isinstance(op, MeasureOp) for op in window) or (
        rule.window == 0 and any(isinstance(op, MeasureOp) for op in c.ops[:position])
    ):
        raise RewriteError(f"{rule.name}: rewriting is limited to the measurement-free prefix")
    replacement = rule.match(window)
    if replacement is None:
        raise RewriteError(f"{rule.name}: no match at position {position}")
    return c.with_ops(c.ops[:position] + tuple(replacement) + c.ops[position + rule.window:])


def oracle_cnots(op: OracleOp, a: int | None = None) -> list[GateOp]:
    """One CNOT per set bit of ``a``, input qubit to output, most significant first."""
    a = op.a if a is None else a
    if a is None:
        raise RewriteError("oracle string unknown; cannot expand")
    bits = format(a, f"0{op.n}b")
    return [_cnot(q, op.output) for q, b in zip(op.inputs, bits) if b == "1"]


def expand_oracle(c: Circuit, a: int | None = None) -> Circuit:
    """Replace the first oracle marker by its CNOT bank.

    ``a`` fills in an opaque marker; it must agree with a marker that
    already knows its string.
    """
    for i, op in enumerate(c.ops):
        if isinstance(op, OracleOp):
            if a is not None and op.a is not None and a != op.a:
                raise RewriteError(f"oracle marker holds a={op.bits}, got {a}")
            return c.with_ops(c.ops[:i] + tuple(oracle_cnots(op, a)) + c.ops[i + 1:])
    raise RewriteError("circuit has no oracle marker")


@dataclass
class _Engine:
    circuit: Circuit
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def ops(self) -> tuple[Op, ...]:
        return self.circuit.ops

    def step(self, rule: RewriteRule, position: int) -> None:
        before = len(self.circuit.ops)
        self.circuit = rewrite_step(self.circuit, rule, position)
        self.trace.append(TraceEntry(rule.name, position, before, len(self.circuit.ops)))

    def move(self, i: int, j: int) -> int:
        """Bubble op ``i`` to index ``j`` through disjoint neighbours."""
        while i < j:
            self.step(COMMUTE_DISJOINT, i)
            i += 1
        while i > j:
            self.step(COMMUTE_DISJOINT, i - 1)
            i -= 1
        return i

    def nearest(self, q: int, start: int, direction: int) -> int | None:
        i = start + direction
        while 0 <= i < len(self.ops):
            if q in self.ops[i].qubits:
                return i
            i += direction
        return None

    def bring_h_left(self, q: int, k: int, placed: int) -> int:
        """Put an H on q just left of the ``placed`` Hs already flanking ops[k].

        Returns the new index of the op that was at ``k``.
        """
        slot = k - 1 - placed
        i = self.nearest(q, k, -1)
        if i is None or not _is(self.ops[i], "H"):
            self.step(hh_insert(q), slot + 1)
            return k + 2
        self.move(i, slot)
        return k

    def bring_h_right(self, q: int, k: int, placed: int) -> None:
        slot = k + 1 + placed
        j = self.nearest(q, k, +1)
        if j is None or not _is(self.ops[j], "H"):
            self.step(hh_insert(q), slot)
            return
        self.move(j, slot)

    def cancel_h_pairs(self) -> None:
        changed = True
        while changed:
            changed = False
            for i, op in enumerate(self.ops):
                if not _is(op, "H"):
                    continue
                j = self.nearest(op.qubits[0], i, +1)
                if j is not None and _is(self.ops[j], "H"):
                    self.move(j, i + 1)
                    self.step(HH_CANCEL, i)
                    changed = True
                    break


def _bank_target(c: Circuit) -> int | None:
    """Output qubit: the oracle's, or else the one target shared by every CNOT."""
    oracles = [op for op in c.ops if isinstance(op, OracleOp)]
    if len(oracles) > 1:
        raise RewriteError("expected at most one oracle marker")
    if oracles:
        return oracles[0].output
    targets = {op.qubits[1] for op in c.ops if _is(op, "CNOT")}
    if len(targets) > 1:
        raise RewriteError("without an oracle marker the CNOT bank must share one target")
    return targets.pop() if targets else None


def bv_simplify(c: Circuit) -> tuple[Circuit, list[TraceEntry]]:
    """Turn ``H-layer; oracle; H-layer`` into output-controlled CNOTs.

    Fixed order: expand the oracle; for each bank CNOT left to right, pull
    the nearest H on its control and on its target up against it from both
    sides (inserting an ``H H`` pair where no H is available) and apply
    conjugate_cnot; finally cancel residual H pairs. A trailing measurement
    is carried through unchanged.
    """
    tail = tuple(op for op in c.ops if isinstance(op, MeasureOp))
    eng = _Engine(Circuit(c.width, c.unitary_ops))
    out = _bank_target(eng.circuit)
    for i, op in enumerate(eng.ops):
        if isinstance(op, OracleOp):
            if op.a is None:
                raise RewriteError("oracle string unknown; cannot expand")
            eng.step(EXPAND_ORACLE, i)
            break

    while True:
        pending = [i for i, op in enumerate(eng.ops) if _is(op, "CNOT") and op.qubits[1] == out]
        if not pending:
            break
        k = pending[0]
        ctrl, tgt = eng.ops[k].qubits
        k = eng.bring_h_left(ctrl, k, 0)
        k = eng.bring_h_left(tgt, k, 1)
        eng.bring_h_right(ctrl, k, 0)
        eng.bring_h_right(tgt, k, 1)
        eng.step(CONJUGATE_CNOT, k - 2)
    eng.cancel_h_pairs()
    return Circuit(c.width, eng.ops + tail), eng.trace
