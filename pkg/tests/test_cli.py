import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toyfriend.circuit import BellMeasure, CircuitError, Hadamard, QuantumCircuit
from toyfriend.cli import main
from toyfriend.dsl import parse_circuit, render_circuit
from toyfriend.scenario import PROTOCOL_DSL, protocol_circuit, random_circuit


def test_parse_protocol():
    text = "qubits 2\nprep q0 0\nprep q1 0\nh q0\ncnot q0 q1\nbellmeas q0 q1"
    assert parse_circuit(text) == protocol_circuit()
    assert parse_circuit(PROTOCOL_DSL) == protocol_circuit()


def test_comments_and_blank_lines():
    c = parse_circuit("# header next\n\nqubits 1  # one\nh q0 # hadamard\n")
    assert c == QuantumCircuit(1, (Hadamard(0),))


def code_of(text):
    with pytest.raises(CircuitError) as e:
        parse_circuit(text)
    return e.value


def test_empty_input():
    e = code_of("")
    assert e.code == "missing-header"
    assert "missing qubits header" in str(e)


def test_qubit_out_of_range():
    e = code_of("qubits 2\nh q5")
    assert e.code == "qubit-out-of-range" and e.line == 2
    assert "qubit out of range" in str(e)


@pytest.mark.parametrize("text,code,line", [
    ("qubits 1\nx q0", "unknown-token", 2),
    ("qubits 2\nh q0\nprep q0 1", "prep-after-use", 3),
    ("qubits 2\nbellmeas q0 q1\nread q0", "non-terminal-bellmeas", 3),
    ("qubits 2\nread q0\nh q0", "use-after-measure", 3),
    ("qubits 1\nprep q0 2", "bad-bit", 2),
    ("qubits 1\nh 0", "bad-qubit", 2),
    ("qubits 1\ncnot q0", "bad-arity", 2),
    ("qubits 2\ncnot q1 q1", "repeated-qubit", 2),
    ("h q0", "missing-header", 1),
    ("qubits 1\nprep q0 0\nprep q0 1", "double-prep", 3),
])
def test_diagnostics(text, code, line):
    e = code_of(text)
    assert (e.code, e.line) == (code, line)


def test_ir_rejects_bad_circuits_directly():
    with pytest.raises(CircuitError):
        QuantumCircuit(2, (BellMeasure(0, 1), Hadamard(0)))
    with pytest.raises(CircuitError):
        QuantumCircuit(0)


def test_render_canonical():
    c = parse_circuit("qubits 2 # x\n  prep   q1 1\nh q0\ncnot q0 q1\nread q0\n")
    assert render_circuit(c) == "qubits 2\nprep q1 1\nh q0\ncnot q0 q1\nread q0\n"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip(seed):
    c = random_circuit(random.Random(seed), 3, 8)
    text = render_circuit(c)
    assert parse_circuit(text) == c
    assert render_circuit(parse_circuit(text)) == text


# -- commands ------------------------------------------------------------------


def test_run_default(capsys):
    assert main(["run"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("ALL CHECKS PASSED (9/9)")


def test_run_json(capsys):
    assert main(["run", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {"steps", "predictions", "verdicts"} <= set(doc)
    assert len(doc["verdicts"]) == 9 and all(v["passed"] for v in doc["verdicts"])
    assert doc["predictions"]["wigner"] == {"phi+": {"num": 1, "den": 1}}
    for step in doc["steps"]:
        for agent in step["agents"].values():
            total = sum(Fraction(w["p"]["num"], w["p"]["den"]) for w in agent["weights"])
            assert total == 1
            assert all(isinstance(w["p"]["num"], int) for w in agent["weights"])


def test_run_step_table(capsys):
    assert main(["run", "--step", "wigner_post_interaction"]) == 0
    out = capsys.readouterr().out
    rows = [ln for ln in out.splitlines() if ln.strip().endswith("1/4")]
    assert len(rows) == 4
    got = {"".join(ln.split("|")[0].split()) for ln in rows}
    assert got == {"0000", "0101", "1110", "1011"}


def test_run_unknown_step(capsys):
    assert main(["run", "--step", "nope"]) == 2


@pytest.fixture
def protocol_file(tmp_path):
    p = tmp_path / "protocol.circ"
    p.write_text(PROTOCOL_DSL, encoding="utf-8")
    return p


def test_simulate_both(protocol_file, capsys):
    assert main(["simulate", str(protocol_file), "--model", "both"]) == 0
    out = capsys.readouterr().out
    assert "toy:     {phi+: 1}" in out
    assert "quantum: {phi+: 1.0}" in out
    assert "match: yes" in out


def test_simulate_toy_plus(tmp_path, capsys):
    p = tmp_path / "plus.circ"
    p.write_text("qubits 1\nprep q0 0\nh q0\nread q0\n")
    assert main(["simulate", str(p), "--model", "toy"]) == 0
    assert capsys.readouterr().out.strip() == "toy:     {0: 1/2, 1: 1/2}"


def test_simulate_require_match(tmp_path, capsys):
    p = tmp_path / "bad.circ"
    p.write_text("qubits 2\nprep q1 1\ncnot q0 q1\nh q0\ncnot q0 q1\nh q0\ncnot q0 q1\nh q1\nread q0\nread q1\n")
    assert main(["simulate", str(p), "--model", "both"]) == 0
    assert main(["simulate", str(p), "--model", "both", "--require-match"]) == 1


def test_simulate_missing_file(capsys):
    assert main(["simulate", "/no/such/file.circ"]) != 0
    assert "file not found" in capsys.readouterr().err


def test_simulate_parse_error_has_file_and_line(tmp_path, capsys):
    p = tmp_path / "e.circ"
    p.write_text("qubits 2\nh q5\n")
    assert main(["simulate", str(p)]) != 0
    assert f"{p}:2: qubit out of range" in capsys.readouterr().err


def test_compare_frozen(capsys):
    assert main(["compare", "--seed", "1", "--count", "100", "--qubits", "2", "--depth", "6"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "matched 94/100"
    assert "first mismatch:" in out
    # the mismatch is rendered in the DSL and parses back
    body = out.split("first mismatch:\n")[1].split("toy:")[0]
    parse_circuit(body)


def test_compare_zero(capsys):
    assert main(["compare", "--count", "0"]) == 0
    assert capsys.readouterr().out.strip() == "matched 0/0"


def test_compare_include(protocol_file, capsys):
    assert main(["compare", "--count", "0", "--include", str(protocol_file)]) == 0
    assert capsys.readouterr().out.strip() == "matched 1/1"


def test_compare_bad_flags():
    with pytest.raises(SystemExit) as e:
        main(["compare", "--count", "-1"])
    assert e.value.code != 0
