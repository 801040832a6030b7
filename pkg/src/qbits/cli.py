"""Command-line front end: ``qbits {bv,simulate,rewrite,verify,dump-gates}``.

Exit codes: 0 ok, 1 verification failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import gates as g
from .bv import bv_circuit, initial_state, solve_classical, solve_quantum
from .circuit import (
    EQUIV_TOL, MAX_EQUIV_WIDTH, CircuitFormatError, load, render, serialize, simulate, to_dict,
    unitary_deviation,
)
from .identities import IDENTITIES, identity_deviation
from .measurement import RandomSource
from .oracle import BvOracle
from .rewrite import RULES, RewriteError, bv_simplify, rewrite_step
from .state import basis_state

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(human)


def _parse_bits(bits: str, n: int | None) -> tuple[int, int]:
    if not bits or set(bits) - {"0", "1"}:
        raise InputError(f"malformed bitstring {bits!r}")
    if n is not None and len(bits) != n:
        raise InputError(f"bitstring {bits!r} has {len(bits)} bits, expected n={n}")
    return int(bits, 2), len(bits)


def cmd_bv(args) -> int:
    a, n = _parse_bits(args.a, args.n)
    if args.mode == "rewrite":
        return _bv_rewrite(args, a, n)
    oracle = BvOracle(a, n)
    if args.mode == "quantum":
        res = solve_quantum(oracle, RandomSource(args.seed))
    else:
        res = solve_classical(oracle)
    payload = {
        "mode": args.mode, "seed": args.seed, "a_found": res.bits,
        "queries": res.queries_used, "amplitude": res.final_amplitude,
    }
    amp = "" if res.final_amplitude is None else f" amplitude={res.final_amplitude:.12g}"
    _emit(args, payload, f"seed={args.seed} mode={args.mode} a_found={res.bits} queries={res.queries_used}{amp}")
    return EXIT_OK


def _bv_rewrite(args, a: int, n: int) -> int:
    original = bv_circuit(n, a, measure=False)
    simplified, trace = bv_simplify(original)
    deviation = unitary_deviation(original, simplified) if n + 1 <= MAX_EQUIV_WIDTH else None
    equivalent = deviation is not None and deviation <= args.tol
    final, _ = simulate(simplified, initial_state(n), RandomSource(args.seed))
    x = int(np.argmax(np.abs(final.amps)))
    found = format(x >> 1, f"0{n}b")
    payload = {
        "mode": "rewrite", "seed": args.seed, "a_found": found,
        "trace": [json.loads(t.to_json()) for t in trace],
        "conjugate_cnot": sum(t.rule == "conjugate_cnot" for t in trace),
        "equivalent": equivalent, "deviation": deviation,
        "circuit": to_dict(simplified),
    }
    lines = [f"seed={args.seed} mode=rewrite a_found={found}", render(original), ""]
    lines += [t.to_json() for t in trace]
    lines += ["", render(simplified), f"conjugate_cnot={payload['conjugate_cnot']} "
              f"equivalent={str(equivalent).lower()} deviation={deviation}"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if equivalent else EXIT_FAIL


def cmd_simulate(args) -> int:
    c = load(args.circuit)
    if args.initial is None:
        initial = basis_state(0, c.width)
    else:
        x, n = _parse_bits(args.initial, c.width)
        initial = basis_state(x, n)
    state, records = simulate(c, initial, RandomSource(args.seed))
    payload = {
        "seed": args.seed,
        "records": [{"outcome": r.bits, "p": r.probability_at_draw} for r in records],
        "state": [[x, format(x, f"0{state.n}b"), a.real, a.imag] for x, a in enumerate(state.amps)],
    }
    human = "\n".join([f"seed={args.seed}", *(r.format() for r in records), state.dump()])
    _emit(args, payload, human)
    return EXIT_OK


def cmd_rewrite(args) -> int:
    c = load(args.circuit)
    if args.rule:
        if args.rule not in RULES:
            raise InputError(f"unknown rule {args.rule!r}; known: {', '.join(RULES)}")
        if args.at is None:
            raise InputError("--rule needs --at POSITION")
        out = rewrite_step(c, RULES[args.rule], args.at)
        trace = []
    else:
        out, trace = bv_simplify(c)
    base = c.with_ops(c.unitary_ops)
    deviation = unitary_deviation(base, out.with_ops(out.unitary_ops))
    equivalent = deviation <= args.tol
    payload = {
        "trace": [json.loads(t.to_json()) for t in trace], "equivalent": equivalent,
        "deviation": deviation, "circuit": to_dict(out),
    }
    human = "\n".join([
        *(t.to_json() for t in trace), render(out), serialize(out).rstrip(),
        f"equivalent={str(equivalent).lower()} deviation={deviation:.3g}",
    ])
    _emit(args, payload, human)
    return EXIT_OK if equivalent else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.pair:
        c1, c2 = (load(p) for p in args.pair)
        for c in (c1, c2):
            if c.width > MAX_EQUIV_WIDTH:
                raise InputError(f"width {c.width} exceeds {MAX_EQUIV_WIDTH}")
            if c.has_measurement:
                raise InputError("circuits to compare must be measurement-free")
        name, deviation = f"{args.pair[0]} vs {args.pair[1]}", unitary_deviation(c1, c2)
    else:
        if args.identity is None:
            raise InputError("give an identity name or --pair A B")
        if args.identity not in IDENTITIES:
            raise InputError(f"unknown identity {args.identity!r}; known: {', '.join(IDENTITIES)}")
        name, deviation = args.identity, identity_deviation(args.identity)
    ok = deviation <= args.tol
    _emit(args, {"identity": name, "pass": ok, "deviation": deviation},
          f"{'pass' if ok else 'fail'} {name} deviation={deviation:.3g}")
    return EXIT_OK if ok else EXIT_FAIL


def _fmt_matrix(m: np.ndarray) -> str:
    def cell(v: complex) -> str:
        re, im = round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0
        return f"{re:g}" if im == 0 else f"{re:g}{im:+g}i"

    return "\n".join("  [" + ", ".join(f"{cell(v):>10}" for v in row) + "]" for row in m)


def cmd_dump_gates(args) -> int:
    mats = dict(g.ONE_QUBIT_MATRICES)
    mats["CNOT"] = g.matrix_of(g.cnot(1, 0), 2)
    mats["CZ"] = g.matrix_of(g.cz(1, 0), 2)
    mats["SWAP"] = g.SWAP_MATRIX
    p_plus, p_minus = g.pauli_projectors()
    mats["P+"], mats["P-"] = p_plus, p_minus
    payload = {k: [[[v.real, v.imag] for v in row] for row in m] for k, m in mats.items()}
    _emit(args, payload, "\n".join(f"{k}:\n{_fmt_matrix(m)}" for k, m in mats.items()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbits", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=EQUIV_TOL, help="equivalence tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bv", parents=[common], help="solve Bernstein-Vazirani")
    p.add_argument("--n", type=int)
    p.add_argument("--a", required=True, help="hidden string as a bitstring")
    p.add_argument("--mode", choices=("quantum", "classical", "rewrite"), default="quantum")
    p.set_defaults(func=cmd_bv)

    p = sub.add_parser("simulate", parents=[common], help="run a circuit file")
    p.add_argument("circuit")
    p.add_argument("--initial", help="initial basis state as a bitstring (default all zeros)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rewrite", parents=[common], help="rewrite a circuit file")
    p.add_argument("circuit")
    p.add_argument("--rule", help="apply one rule instead of the BV pipeline")
    p.add_argument("--at", type=int)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("verify", parents=[common], help="check an identity or a circuit pair")
    p.add_argument("identity", nargs="?", help=", ".join(IDENTITIES))
    p.add_argument("--pair", nargs=2, metavar=("A", "B"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-gates", parents=[common], help="print gate matrices")
    p.set_defaults(func=cmd_dump_gates)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, CircuitFormatError, RewriteError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
