"""Line-oriented circuit language.

::

    qubits 2
    prep q0 0      # comments run to end of line
    h q0
    cnot q0 q1
    read q1
    bellmeas q0 q1
"""

from __future__ import annotations

import re

from .circuit import (
    BellMeasure,
    CircuitError,
    Cnot,
    Hadamard,
    PrepComputational,
    QuantumCircuit,
    ReadComputational,
)

_QUBIT = re.compile(r"q(\d+)$")
_ARITY = {"prep": 2, "h": 1, "cnot": 2, "read": 1, "bellmeas": 2}


def _qubit(tok: str, line: int) -> int:
    m = _QUBIT.match(tok)
    if not m:
        raise CircuitError("bad-qubit", f"expected a qubit like q0, got {tok!r}", line)
    return int(m.group(1))


def parse_circuit(text: str) -> QuantumCircuit:
    qubits = None
    gates, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        op, args = toks[0], toks[1:]
        if qubits is None:
            if op != "qubits":
                raise CircuitError("missing-header", "missing qubits header", lineno)
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise CircuitError("bad-header", "qubits header needs one positive integer", lineno)
            qubits = int(args[0])
            continue
        if op == "qubits":
            raise CircuitError("duplicate-header", "qubits header given twice", lineno)
        if op not in _ARITY:
            raise CircuitError("unknown-token", f"unknown statement {op!r}", lineno)
        if len(args) != _ARITY[op]:
            raise CircuitError("bad-arity", f"{op} takes {_ARITY[op]} arguments, got {len(args)}", lineno)
        if op == "prep":
            if args[1] not in ("0", "1"):
                raise CircuitError("bad-bit", f"prep bit must be 0 or 1, got {args[1]!r}", lineno)
            g = PrepComputational(_qubit(args[0], lineno), int(args[1]))
        elif op == "h":
            g = Hadamard(_qubit(args[0], lineno))
        elif op == "cnot":
            g = Cnot(_qubit(args[0], lineno), _qubit(args[1], lineno))
        elif op == "read":
            g = ReadComputational(_qubit(args[0], lineno))
        else:
            g = BellMeasure(_qubit(args[0], lineno), _qubit(args[1], lineno))
        gates.append(g)
        lines.append(lineno)
    if qubits is None:
        raise CircuitError("missing-header", "missing qubits header")
    return QuantumCircuit(qubits, tuple(gates), tuple(lines))


def render_gate(g) -> str:
    if isinstance(g, PrepComputational):
        return f"prep q{g.qubit} {g.bit}"
    if isinstance(g, Hadamard):
        return f"h q{g.qubit}"
    if isinstance(g, Cnot):
        return f"cnot q{g.control} q{g.target}"
    if isinstance(g, ReadComputational):
        return f"read q{g.qubit}"
    if isinstance(g, BellMeasure):
        return f"bellmeas q{g.first} q{g.second}"
    raise CircuitError("unsupported-gate", f"cannot render {g!r}")


def render_circuit(c: QuantumCircuit) -> str:
    return "\n".join([f"qubits {c.qubit_count}", *map(render_gate, c.gates)]) + "\n"
