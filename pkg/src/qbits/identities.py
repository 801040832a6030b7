"""Named circuit identities, each a list of matrix pairs that must agree."""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import gates as g
from .circuit import Circuit, GateOp, circuit_unitary, phase_aligned_deviation

Pairs = list[tuple[np.ndarray, np.ndarray]]


def _c(width: int, *ops: tuple) -> Circuit:
    return Circuit(width, tuple(GateOp(name, tuple(q)) for name, *q in ops))


def _circuits(*pairs: tuple[Circuit, Circuit]) -> Pairs:
    return [(circuit_unitary(a), circuit_unitary(b)) for a, b in pairs]


def _fig4() -> Pairs:
    return _circuits(*(
        (_c(2, ("H", 0), ("H", 1), ("CNOT", c, t), ("H", 0), ("H", 1)), _c(2, ("CNOT", t, c)))
        for c, t in ((0, 1), (1, 0))
    ))


def _projector_form() -> np.ndarray:
    p_plus, p_minus = g.pauli_projectors()
    return p_plus + np.kron(g.X, g.X) @ p_minus


IDENTITIES: dict[str, tuple[str, Callable[[], Pairs]]] = {
    "hh": ("H H = 1", lambda: _circuits((_c(1, ("H", 0), ("H", 0)), _c(1, ("I", 0))))),
    "hxh": ("H X H = Z", lambda: _circuits((_c(1, ("H", 0), ("X", 0), ("H", 0)), _c(1, ("Z", 0))))),
    "hzh": ("H Z H = X", lambda: _circuits((_c(1, ("H", 0), ("Z", 0), ("H", 0)), _c(1, ("X", 0))))),
    "fig4": ("H on both wires exchanges cNOT control and target", _fig4),
    "cz_symmetry": ("CZ(0,1) = CZ(1,0)", lambda: _circuits((_c(2, ("CZ", 0, 1)), _c(2, ("CZ", 1, 0))))),
    "cnot_via_cz": (
        "CNOT(c,t) = H_t CZ(c,t) H_t",
        lambda: _circuits(*(
            (_c(2, ("CNOT", c, t)), _c(2, ("H", t), ("CZ", c, t), ("H", t))) for c, t in ((0, 1), (1, 0))
        )),
    ),
    "fig7": (
        "SWAP CNOT(0,1) SWAP = CNOT(1,0)",
        lambda: _circuits((_c(2, ("SWAP", 0, 1), ("CNOT", 0, 1), ("SWAP", 0, 1)), _c(2, ("CNOT", 1, 0)))),
    ),
    "exchg": ("(1 + ZZ + XX - YY)/2 = SWAP, Y = XZ", lambda: [(g.swap_via_paulis(), g.SWAP_MATRIX)]),
    "exchg_hermitian": (
        "(1 + XX + YY + ZZ)/2 = SWAP, Y = iXZ",
        lambda: [(g.swap_via_paulis(hermitian=True), g.SWAP_MATRIX)],
    ),
    "exchg_projectors": ("(1 + ZZ)/2 + XX (1 - ZZ)/2 = SWAP", lambda: [(_projector_form(), g.SWAP_MATRIX)]),
    "x_vs_z": ("X = Z (negative control)", lambda: _circuits((_c(1, ("X", 0)), _c(1, ("Z", 0))))),
}


def identity_pairs(name: str) -> Pairs:
    if name not in IDENTITIES:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(IDENTITIES)}")
    return IDENTITIES[name][1]()


def identity_deviation(name: str, exact: bool = False) -> float:
    """Largest entrywise gap over the identity's pairs, modulo global phase unless ``exact``."""
    devs = []
    for lhs, rhs in identity_pairs(name):
        devs.append(float(np.max(np.abs(lhs - rhs))) if exact else phase_aligned_deviation(lhs, rhs))
    return max(devs)
