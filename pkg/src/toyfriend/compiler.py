"""Lowering of the quantum circuit IR onto toy-model CNOTs.

Correspondence rules, per qubit ``X`` with registers ``X`` (unprimed) and
``X'`` (primed):

* ``prep X b``  -> ``X = b``, ``X'`` uniform (state construction, no toy ops)
* ``H X``       -> ``CNOT(X' -> X)``
* ``CNOT X Y``  -> ``CNOT(X -> Y)``, ``CNOT(Y' -> X')``
* ``bellmeas X Y`` -> ``CNOT(X -> Y)``, ``CNOT(Y' -> X')``, ``CNOT(X' -> X)``,
  read ``X``, ``Y``, then forget ``X'``, ``Y'``
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import (
    BELL_LABELS,
    BellMeasure,
    CircuitError,
    Cnot,
    Hadamard,
    PrepComputational,
    QuantumCircuit,
    QuantumGate,
    ReadComputational,
)
from .ontic import (
    EpistemicState,
    RegisterId,
    ToyCnot,
    ToyCircuit,
    prepare_computational,
    primed,
    tensor_all,
    unprimed,
)


@dataclass(frozen=True)
class CompiledStep:
    source_gate: QuantumGate
    toy_ops: ToyCircuit = ()
    # (register, label) pairs; for a Bell step the label is the pair's role
    readouts: tuple[tuple[RegisterId, str], ...] = ()
    # primed registers the measuring agent re-randomizes after reading out
    forget: frozenset[RegisterId] = field(default_factory=frozenset)

    @property
    def is_measurement(self) -> bool:
        return bool(self.readouts)

    def label_outcome(self, bits: tuple[int, ...]) -> str:
        """Map read-out bits (ordered as :attr:`readouts`) to an outcome label."""
        if isinstance(self.source_gate, BellMeasure):
            return str(BELL_LABELS[bits])
        return "".join(map(str, bits))


def compile_gate(g: QuantumGate) -> CompiledStep:
    if isinstance(g, PrepComputational):
        return CompiledStep(g)
    if isinstance(g, Hadamard):
        return CompiledStep(g, (ToyCnot(primed(g.qubit), unprimed(g.qubit)),))
    if isinstance(g, Cnot):
        return CompiledStep(g, _cnot_ops(g.control, g.target))
    if isinstance(g, ReadComputational):
        return CompiledStep(g, readouts=((unprimed(g.qubit), str(unprimed(g.qubit))),))
    if isinstance(g, BellMeasure):
        return compile_bell_measurement((g.first, g.second))
    raise CircuitError("unsupported-gate", f"no toy-model rule for {g!r}")


def _cnot_ops(x: int, y: int) -> ToyCircuit:
    return (ToyCnot(unprimed(x), unprimed(y)), ToyCnot(primed(y), primed(x)))


def compile_bell_measurement(pair: tuple[int, int]) -> CompiledStep:
    s, f = pair
    if s == f:
        raise CircuitError("repeated-qubit", f"Bell measurement needs two distinct qubits, got q{s} twice")
    ops = _cnot_ops(s, f) + (ToyCnot(primed(s), unprimed(s)),)
    return CompiledStep(
        BellMeasure(s, f),
        ops,
        readouts=((unprimed(s), "first"), (unprimed(f), "second")),
        forget=frozenset({primed(s), primed(f)}),
    )


def compile_circuit(c: QuantumCircuit) -> list[CompiledStep]:
    return [compile_gate(g) for g in c.gates]


def toy_ops(steps) -> ToyCircuit:
    return tuple(op for st in steps for op in st.toy_ops)


def initial_state(c: QuantumCircuit) -> EpistemicState:
    """Product of per-qubit preparations; unprepared qubits default to |0>."""
    return tensor_all(prepare_computational(q, b) for q, b in enumerate(c.initial_bits()))


def invert(ops) -> ToyCircuit:
    # each toy CNOT is its own inverse
    return tuple(reversed(tuple(ops)))
