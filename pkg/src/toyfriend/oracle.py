"""Dense statevector simulator for the circuit IR (Born-rule reference).

Qubit 0 is the most significant bit of the basis index, matching the
canonical register order of the toy model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    BELL_LABELS,
    BellMeasure,
    CircuitError,
    Cnot,
    Hadamard,
    PrepComputational,
    QuantumCircuit,
    ReadComputational,
    outcome_key,
)

TOL = 1e-12
_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


class ZeroProbabilityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2 ** self.qubit_count:
            raise ValueError(f"need {2 ** self.qubit_count} amplitudes, got {amps.size}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, bits) -> StateVector:
        bits = tuple(bits)
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int("".join(map(str, bits)) or "0", 2)] = 1.0
        return cls(len(bits), amps)

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.qubit_count)

    def close_to(self, other: StateVector, tol: float = TOL) -> bool:
        return self.qubit_count == other.qubit_count and bool(np.allclose(self.amplitudes, other.amplitudes, atol=tol, rtol=0))

    def __repr__(self):
        return f"StateVector({np.round(self.amplitudes, 12).tolist()})"


def _apply_1q(v: StateVector, u: np.ndarray, q: int) -> StateVector:
    t = np.moveaxis(np.tensordot(u, v.tensor_view(), axes=([1], [q])), 0, q)
    return StateVector(v.qubit_count, t.reshape(-1))


def apply_hadamard(v: StateVector, q: int) -> StateVector:
    return _apply_1q(v, _H, q)


def apply_x(v: StateVector, q: int) -> StateVector:
    return _apply_1q(v, np.array([[0.0, 1.0], [1.0, 0.0]]), q)


def apply_cnot(v: StateVector, control: int, target: int) -> StateVector:
    t = v.tensor_view().copy()
    sel = [slice(None)] * v.qubit_count
    sel[control] = 1
    sub = t[tuple(sel)]
    # target axis index shifts down once the control axis is fixed
    axis = target if target < control else target - 1
    t[tuple(sel)] = np.flip(sub, axis=axis)
    return StateVector(v.qubit_count, t.reshape(-1))


def simulate(c: QuantumCircuit) -> StateVector:
    """Statevector after the circuit's preparations and unitary gates."""
    v = StateVector.basis((0,) * c.qubit_count)
    for g in c.gates:
        if isinstance(g, PrepComputational):
            if g.bit:
                v = apply_x(v, g.qubit)
        elif isinstance(g, Hadamard):
            v = apply_hadamard(v, g.qubit)
        elif isinstance(g, Cnot):
            v = apply_cnot(v, g.control, g.target)
        elif isinstance(g, (ReadComputational, BellMeasure)):
            raise CircuitError("measurement-in-unitary", f"simulate takes unitary circuits only, got {g!r}")
        else:
            raise CircuitError("unsupported-gate", f"unsupported gate {g!r}")
    return v


def run(c: QuantumCircuit) -> tuple[StateVector, dict[str, float]]:
    """Simulate the unitary part, then Born probabilities of its measurements."""
    meas = c.measurements
    unitary = QuantumCircuit(c.qubit_count, tuple(g for g in c.gates if not isinstance(g, (ReadComputational, BellMeasure))))
    v = simulate(unitary)
    return v, born_probabilities(v, meas)


def born_probabilities(v: StateVector, measurement) -> dict[str, float]:
    """Born-rule distribution of a tuple of terminal measurements.

    ``measurement`` is a ReadComputational, a BellMeasure, or a sequence of
    them.  A Bell measurement is CNOT(first -> second), H(first), then a
    computational readout of both.
    """
    if isinstance(measurement, (ReadComputational, BellMeasure)):
        measurement = (measurement,)
    reads: list[int] = []
    bell = None
    for m in measurement:
        if isinstance(m, ReadComputational):
            reads.append(m.qubit)
        elif isinstance(m, BellMeasure):
            if bell is not None:
                raise CircuitError("double-bellmeas", "at most one Bell measurement")
            bell = m
        else:
            raise CircuitError("unsupported-gate", f"not a measurement: {m!r}")
    if bell is not None:
        v = apply_hadamard(apply_cnot(v, bell.first, bell.second), bell.first)
    probs = np.abs(v.tensor_view()) ** 2
    shown = reads + ([bell.first, bell.second] if bell else [])
    if len(set(shown)) != len(shown):
        raise CircuitError("repeated-qubit", "a qubit is measured twice")
    rest = tuple(q for q in range(v.qubit_count) if q not in shown)
    marg = probs.sum(axis=rest) if rest else probs
    # marg axes follow sorted(shown); reorder to measurement order
    marg = np.transpose(marg, [sorted(shown).index(q) for q in shown])
    dist: dict[str, float] = {}
    for idx in np.ndindex(marg.shape):
        p = float(marg[idx])
        if p <= TOL:
            continue
        bits = idx[:len(reads)]
        label = BELL_LABELS[tuple(idx[len(reads):])] if bell else None
        key = outcome_key(bits, label)
        dist[key] = dist.get(key, 0.0) + p
    return dict(sorted(dist.items()))


def collapse_oracle(v: StateVector, qubit: int, outcome: int) -> StateVector:
    """Project ``qubit`` onto ``|outcome>`` and renormalize."""
    t = v.tensor_view().copy()
    sel = [slice(None)] * v.qubit_count
    sel[qubit] = 1 - outcome
    t[tuple(sel)] = 0.0
    norm2 = float(np.vdot(t, t).real)
    if norm2 <= TOL:
        raise ZeroProbabilityError(f"outcome {outcome} on q{qubit} has probability 0")
    return StateVector(v.qubit_count, t.reshape(-1) / np.sqrt(norm2))
