import json
from pathlib import Path

import pytest

from qbits.cli import main

CIRCUITS = Path(__file__).resolve().parent.parent / "circuits"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_bv_quantum(capsys):
    code, doc = run_json(capsys, "bv", "--n", "5", "--a", "11010", "--mode", "quantum")
    assert code == 0
    assert (doc["a_found"], doc["queries"], doc["seed"]) == ("11010", 1, 0)
    assert doc["amplitude"] == pytest.approx(1.0, abs=1e-9)


def test_bv_classical(capsys):
    code, doc = run_json(capsys, "bv", "--n", "5", "--a", "00000", "--mode", "classical")
    assert code == 0 and (doc["a_found"], doc["queries"]) == ("00000", 5)


def test_bv_rewrite(capsys):
    code, doc = run_json(capsys, "bv", "--n", "5", "--a", "11010", "--mode", "rewrite", "--seed", "9")
    assert code == 0 and doc["equivalent"] is True and doc["seed"] == 9
    assert [t["rule"] for t in doc["trace"]].count("conjugate_cnot") == 3
    assert doc["conjugate_cnot"] == 3 and doc["a_found"] == "11010"
    assert set(doc["trace"][0]) == {"rule", "position", "before_len", "after_len"}


def test_bv_human_output_echoes_seed(capsys):
    code, out, _ = run(capsys, "bv", "--a", "101", "--seed", "17")
    assert code == 0 and out.startswith("seed=17") and "a_found=101 queries=1" in out
    code, out, _ = run(capsys, "bv", "--a", "101", "--mode", "rewrite")
    assert code == 0 and "conjugate_cnot=2 equivalent=true" in out


@pytest.mark.parametrize("argv", [
    ("bv", "--n", "5", "--a", "1101"),
    ("bv", "--a", "10a1"),
])
def test_bv_malformed(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_simulate_fig2_file(capsys):
    code, doc = run_json(capsys, "simulate", str(CIRCUITS / "fig2_n3_a101.json"))
    assert code == 0 and doc["records"][0]["outcome"] == "101"
    code, out, _ = run(capsys, "simulate", str(CIRCUITS / "fig2_n3_a101.json"))
    assert "outcome=101 p=1" in out


def test_simulate_empty_circuit(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text('{"width": 1, "ops": []}')
    code, out, _ = run(capsys, "simulate", str(path))
    assert code == 0
    assert out.splitlines()[1:] == ["0\t0\t1\t0", "1\t1\t0\t0"]


def test_simulate_is_deterministic(capsys):
    outs = [run(capsys, "simulate", str(CIRCUITS / "bell.json"), "--seed", "4")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_simulate_unknown_gate(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"width": 1, "ops": [{"gate": "TOFFOLI", "q": [0]}]}')
    code, _, err = run(capsys, "simulate", str(path))
    assert code == 2 and "TOFFOLI" in err


def test_simulate_initial_state(capsys):
    code, doc = run_json(capsys, "simulate", str(CIRCUITS / "fig4_rhs.json"), "--initial", "10")
    assert code == 0
    assert [row[2] for row in doc["state"]] == [0, 0, 0, 1]


@pytest.mark.parametrize("name", ["fig4", "fig7", "hh", "hxh", "cz_symmetry", "exchg", "exchg_hermitian"])
def test_verify_identities(capsys, name):
    code, doc = run_json(capsys, "verify", name)
    assert code == 0 and doc["pass"] and doc["deviation"] < 1e-12


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "x_vs_z")
    assert code == 1 and out.startswith("fail")


def test_verify_pair(capsys):
    code, doc = run_json(capsys, "verify", "--pair", str(CIRCUITS / "fig7_lhs.json"), str(CIRCUITS / "fig4_rhs.json"))
    assert code == 0 and doc["pass"]


def test_verify_rejects_wide_circuits(tmp_path, capsys):
    path = tmp_path / "wide.json"
    path.write_text('{"width": 11, "ops": []}')
    code, _, err = run(capsys, "verify", "--pair", str(path), str(path))
    assert code == 2 and "exceeds" in err
    code, _, _ = run(capsys, "verify", "no_such_identity")
    assert code == 2


def test_rewrite_file(capsys):
    code, doc = run_json(capsys, "rewrite", str(CIRCUITS / "fig2_n3_a101.json"))
    assert code == 0 and doc["equivalent"]
    names = [op.get("gate") for op in doc["circuit"]["ops"]]
    assert names == ["X", "CNOT", "CNOT", None]


def test_rewrite_single_rule(capsys):
    code, doc = run_json(capsys, "rewrite", str(CIRCUITS / "fig4_lhs.json"), "--rule", "conjugate_cnot", "--at", "0")
    assert code == 0 and doc["circuit"]["ops"] == [{"gate": "CNOT", "q": [1, 0]}]
    code, _, err = run(capsys, "rewrite", str(CIRCUITS / "fig4_lhs.json"), "--rule", "hh_cancel", "--at", "0")
    assert code == 2 and "no match" in err


def test_dump_gates(capsys):
    code, doc = run_json(capsys, "dump-gates")
    assert code == 0
    assert set(doc) >= {"X", "Z", "Y", "YH", "H", "I", "CNOT", "CZ", "SWAP"}
    assert doc["Y"] == [[[0, 0], [-1, 0]], [[1, 0], [0, 0]]]
    code, out, _ = run(capsys, "dump-gates")
    assert "SWAP:" in out
