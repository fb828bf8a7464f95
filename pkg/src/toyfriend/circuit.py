"""Quantum circuit IR shared by the toy compiler and the statevector oracle."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class CircuitError(ValueError):
    """An ill-formed circuit.  ``code`` is a stable diagnostic identifier."""

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        self.reason = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message} [{code}]")


class BellLabel(str, enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    def __str__(self):
        return self.value


# readout bits of (first, second) qubit after uncomputing CNOT then H on the first
BELL_LABELS = {
    (0, 0): BellLabel.PHI_PLUS,
    (1, 0): BellLabel.PHI_MINUS,
    (0, 1): BellLabel.PSI_PLUS,
    (1, 1): BellLabel.PSI_MINUS,
}


@dataclass(frozen=True)
class PrepComputational:
    qubit: int
    bit: int

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class Hadamard:
    qubit: int

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class ReadComputational:
    qubit: int

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class BellMeasure:
    first: int
    second: int

    @property
    def qubits(self):
        return (self.first, self.second)


QuantumGate = PrepComputational | Hadamard | Cnot | ReadComputational | BellMeasure
MEASUREMENTS = (ReadComputational, BellMeasure)


@dataclass(frozen=True)
class QuantumCircuit:
    """Ordered gate list over ``qubit_count`` qubits.

    Qubits never explicitly prepared start in |0>.  A ``prep`` must precede
    every other use of its qubit, a measured qubit is not touched again, and
    a Bell measurement, if present, comes last.
    """

    qubit_count: int
    gates: tuple[QuantumGate, ...] = ()
    # source line per gate, for diagnostics only
    lines: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.qubit_count < 1:
            raise CircuitError("bad-qubit-count", f"qubit count must be positive, got {self.qubit_count}")
        validate(self)

    def __eq__(self, other):
        if not isinstance(other, QuantumCircuit):
            return NotImplemented
        return (self.qubit_count, self.gates) == (other.qubit_count, other.gates)

    def __hash__(self):
        return hash((self.qubit_count, self.gates))

    def initial_bits(self) -> tuple[int, ...]:
        bits = [0] * self.qubit_count
        for g in self.gates:
            if isinstance(g, PrepComputational):
                bits[g.qubit] = g.bit
        return tuple(bits)

    @property
    def unitary_gates(self) -> tuple[QuantumGate, ...]:
        return tuple(g for g in self.gates if isinstance(g, (Hadamard, Cnot)))

    @property
    def measurements(self) -> tuple[QuantumGate, ...]:
        return tuple(g for g in self.gates if isinstance(g, MEASUREMENTS))


def validate(c: QuantumCircuit) -> None:
    used: set[int] = set()
    prepared: set[int] = set()
    measured: set[int] = set()
    bell_seen = False
    for pos, g in enumerate(c.gates):
        line = c.lines[pos] if c.lines else None
        if not isinstance(g, (PrepComputational, Hadamard, Cnot, ReadComputational, BellMeasure)):
            raise CircuitError("unsupported-gate", f"unsupported gate {g!r}", line)
        for q in g.qubits:
            if not 0 <= q < c.qubit_count:
                raise CircuitError("qubit-out-of-range", f"qubit out of range: q{q} (qubits {c.qubit_count})", line)
        if bell_seen:
            raise CircuitError("non-terminal-bellmeas", "bellmeas must be the last statement", line)
        if len(set(g.qubits)) != len(g.qubits):
            raise CircuitError("repeated-qubit", f"gate {g} uses the same qubit twice", line)
        if isinstance(g, PrepComputational):
            if g.bit not in (0, 1):
                raise CircuitError("bad-bit", f"prep bit must be 0 or 1, got {g.bit}", line)
            if g.qubit in prepared:
                raise CircuitError("double-prep", f"q{g.qubit} prepared twice", line)
            if g.qubit in used:
                raise CircuitError("prep-after-use", f"prep of q{g.qubit} after it was used", line)
            prepared.add(g.qubit)
            continue
        for q in g.qubits:
            if q in measured:
                raise CircuitError("use-after-measure", f"q{q} used after it was measured", line)
        used.update(g.qubits)
        if isinstance(g, MEASUREMENTS):
            measured.update(g.qubits)
        if isinstance(g, BellMeasure):
            bell_seen = True


def outcome_key(bits, bell=None) -> str:
    """Outcome label: read-out bits in gate order, then the Bell label if any."""
    key = "".join(str(b) for b in bits)
    if bell is None:
        return key
    return f"{key} {bell}" if key else str(bell)
