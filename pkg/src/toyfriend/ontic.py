"""Ontic state space, exact epistemic distributions and permutation dynamics.

Every toy qubit ``q`` owns two binary registers: an unprimed one, read out by a
computational measurement, and a primed one that stays hidden.  An
:class:`EpistemicState` is an exact probability distribution over total bit
assignments to a declared set of registers.  Weights are
:class:`fractions.Fraction`, so distribution equality is structural.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


class ImpossibleEventError(ValueError):
    """Conditioning on an event of probability zero."""


class RegisterError(ValueError):
    """A register is missing, duplicated or declared twice."""


class Kind(enum.IntEnum):
    UNPRIMED = 0
    PRIMED = 1


@total_ordering
@dataclass(frozen=True)
class RegisterId:
    qubit_index: int
    kind: Kind = Kind.UNPRIMED

    def __post_init__(self):
        if self.qubit_index < 0:
            raise RegisterError(f"negative qubit index {self.qubit_index}")

    def __lt__(self, other):
        if not isinstance(other, RegisterId):
            return NotImplemented
        return (self.qubit_index, self.kind) < (other.qubit_index, other.kind)

    @property
    def partner(self) -> RegisterId:
        return RegisterId(self.qubit_index, Kind(1 - self.kind))

    def __str__(self):
        return f"q{self.qubit_index}" + ("'" if self.kind is Kind.PRIMED else "")


def unprimed(qubit: int) -> RegisterId:
    return RegisterId(qubit, Kind.UNPRIMED)


def primed(qubit: int) -> RegisterId:
    return RegisterId(qubit, Kind.PRIMED)


def qubit_registers(qubit: int) -> tuple[RegisterId, RegisterId]:
    return unprimed(qubit), primed(qubit)


@dataclass(frozen=True)
class OnticState:
    """A total bit assignment to ``registers`` (kept in canonical order)."""

    registers: tuple[RegisterId, ...]
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.registers) != len(self.bits):
            raise RegisterError("every declared register needs exactly one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits}")

    def __getitem__(self, reg: RegisterId) -> int:
        try:
            return self.bits[self.registers.index(reg)]
        except ValueError:
            raise RegisterError(f"register {reg} not declared") from None

    def as_dict(self) -> dict[RegisterId, int]:
        return dict(zip(self.registers, self.bits))

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class ToyCnot:
    """Elementary toy dynamics: ``target <- target XOR control``."""

    control: RegisterId
    target: RegisterId

    def __post_init__(self):
        if self.control == self.target:
            raise RegisterError(f"control and target coincide: {self.control}")

    def __str__(self):
        return f"CNOT({self.control}->{self.target})"


ToyCircuit = tuple[ToyCnot, ...]


def _canonical(registers: Iterable[RegisterId]) -> tuple[RegisterId, ...]:
    regs = tuple(registers)
    if len(set(regs)) != len(regs):
        raise RegisterError(f"duplicate registers in {[str(r) for r in regs]}")
    return tuple(sorted(regs))


class EpistemicState:
    """Exact, sparse probability distribution over ontic states.

    Keys of :attr:`weights` are bit tuples aligned with :attr:`registers`.
    Zero weights are never stored.  Instances are immutable.
    """

    __slots__ = ("_registers", "_weights", "_index")

    def __init__(self, registers: Iterable[RegisterId], weights: Mapping[tuple[int, ...], Fraction | int]):
        given = tuple(registers)
        regs = _canonical(given)
        order = [given.index(r) for r in regs]
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} on {key}")
            if len(key) != len(regs) or any(b not in (0, 1) for b in key):
                raise ValueError(f"malformed ontic state {key} for {len(regs)} registers")
            if w:
                k = tuple(key[i] for i in order)
                clean[k] = clean.get(k, Fraction(0)) + w
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        self._registers = regs
        self._weights = dict(sorted(clean.items()))
        self._index = {r: i for i, r in enumerate(regs)}

    # -- constructors -------------------------------------------------------

    @classmethod
    def point(cls, assignment: Mapping[RegisterId, int]) -> EpistemicState:
        regs = tuple(assignment)
        return cls(regs, {tuple(assignment[r] for r in regs): 1})

    @classmethod
    def uniform(cls, registers: Iterable[RegisterId]) -> EpistemicState:
        regs = _canonical(registers)
        w = Fraction(1, 2 ** len(regs))
        return cls(regs, {bits: w for bits in itertools.product((0, 1), repeat=len(regs))})

    @classmethod
    def from_terms(cls, registers: Iterable[RegisterId], terms: Iterable[str]) -> EpistemicState:
        """Equal mixture of the listed bit strings, e.g. ``["0000", "0101"]``."""
        terms = list(terms)
        w = Fraction(1, len(terms))
        acc: dict[tuple[int, ...], Fraction] = {}
        for t in terms:
            key = tuple(int(c) for c in t)
            acc[key] = acc.get(key, Fraction(0)) + w
        return cls(registers, acc)

    # -- accessors ----------------------------------------------------------

    @property
    def registers(self) -> tuple[RegisterId, ...]:
        return self._registers

    @property
    def weights(self) -> Mapping[tuple[int, ...], Fraction]:
        return dict(self._weights)

    def __len__(self):
        return len(self._weights)

    def __iter__(self) -> Iterator[tuple[OnticState, Fraction]]:
        for bits, w in self._weights.items():
            yield OnticState(self._registers, bits), w

    def index(self, reg: RegisterId) -> int:
        try:
            return self._index[reg]
        except KeyError:
            raise RegisterError(f"register {reg} not declared in {self}") from None

    def probability(self, assignment: Mapping[RegisterId, int]) -> Fraction:
        pos = [(self.index(r), b) for r, b in assignment.items()]
        return sum(
            (w for bits, w in self._weights.items() if all(bits[i] == b for i, b in pos)),
            Fraction(0),
        )

    def is_deterministic(self, reg: RegisterId) -> int | None:
        """The value of ``reg`` if it is the same on the whole support."""
        i = self.index(reg)
        values = {bits[i] for bits in self._weights}
        return values.pop() if len(values) == 1 else None

    def __eq__(self, other):
        if not isinstance(other, EpistemicState):
            return NotImplemented
        return self._registers == other._registers and self._weights == other._weights

    def __hash__(self):
        return hash((self._registers, frozenset(self._weights.items())))

    def __repr__(self):
        terms = " + ".join(f"{w}*|{''.join(map(str, b))}>" for b, w in self._weights.items())
        regs = ",".join(map(str, self._registers))
        return f"EpistemicState[{regs}]({terms})"


# -- operations -------------------------------------------------------------


def prepare_computational(qubit: int, bit: int) -> EpistemicState:
    """Unprimed register set to ``bit``, primed register uniform."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    half = Fraction(1, 2)
    return EpistemicState(qubit_registers(qubit), {(bit, 0): half, (bit, 1): half})


def tensor(a: EpistemicState, b: EpistemicState) -> EpistemicState:
    overlap = set(a.registers) & set(b.registers)
    if overlap:
        raise RegisterError(f"overlapping registers {sorted(map(str, overlap))}")
    regs = a.registers + b.registers
    return EpistemicState(
        regs,
        {ka + kb: wa * wb for ka, wa in a.weights.items() for kb, wb in b.weights.items()},
    )


def tensor_all(states: Iterable[EpistemicState]) -> EpistemicState:
    out = EpistemicState((), {(): 1})
    for s in states:
        out = tensor(out, s)
    return out


def apply_cnot(s: EpistemicState, g: ToyCnot) -> EpistemicState:
    c, t = s.index(g.control), s.index(g.target)
    out = {}
    for bits, w in s.weights.items():
        if bits[c]:
            bits = bits[:t] + (1 - bits[t],) + bits[t + 1:]
        out[bits] = w
    return EpistemicState(s.registers, out)


def apply_circuit(s: EpistemicState, ops: Iterable[ToyCnot]) -> EpistemicState:
    for g in ops:
        s = apply_cnot(s, g)
    return s


def marginalize(s: EpistemicState, keep: Iterable[RegisterId]) -> EpistemicState:
    keep = _canonical(keep)
    idx = [s.index(r) for r in keep]
    out: dict[tuple[int, ...], Fraction] = {}
    for bits, w in s.weights.items():
        k = tuple(bits[i] for i in idx)
        out[k] = out.get(k, Fraction(0)) + w
    return EpistemicState(keep, out)


def condition(s: EpistemicState, assignments: Mapping[RegisterId, int]) -> tuple[EpistemicState, Fraction]:
    """Bayesian update on ``assignments``; returns (posterior, prior event probability)."""
    if not assignments:
        raise ValueError("condition needs at least one assignment")
    pos = [(s.index(r), b) for r, b in assignments.items()]
    hits = {bits: w for bits, w in s.weights.items() if all(bits[i] == b for i, b in pos)}
    p = sum(hits.values(), Fraction(0))
    if p == 0:
        shown = ", ".join(f"{r}={b}" for r, b in assignments.items())
        raise ImpossibleEventError(f"event {{{shown}}} has probability 0")
    return EpistemicState(s.registers, {k: w / p for k, w in hits.items()}), p


def reset_uniform(s: EpistemicState, vars: Iterable[RegisterId]) -> EpistemicState:
    """Forget everything about ``vars``: keep the rest's marginal, make ``vars`` uniform."""
    vars = set(vars)
    for r in vars:
        s.index(r)
    rest = marginalize(s, [r for r in s.registers if r not in vars])
    return tensor(rest, EpistemicState.uniform(vars))


def assign(s: EpistemicState, assignments: Mapping[RegisterId, int]) -> EpistemicState:
    """Push-forward under overwriting the given registers with fixed bits."""
    pos = [(s.index(r), b) for r, b in assignments.items()]
    out: dict[tuple[int, ...], Fraction] = {}
    for bits, w in s.weights.items():
        k = list(bits)
        for i, b in pos:
            k[i] = b
        k = tuple(k)
        out[k] = out.get(k, Fraction(0)) + w
    return EpistemicState(s.registers, out)


def mixture(components: Iterable[tuple[Fraction, EpistemicState]]) -> EpistemicState:
    components = list(components)
    regs = components[0][1].registers
    out: dict[tuple[int, ...], Fraction] = {}
    for p, st in components:
        if st.registers != regs:
            raise RegisterError("mixture components must share registers")
        for k, w in st.weights.items():
            out[k] = out.get(k, Fraction(0)) + p * w
    return EpistemicState(regs, out)


def sample(s: EpistemicState, rng: random.Random) -> OnticState:
    """Draw one ontic state exactly (integer draw below the common denominator)."""
    den = math.lcm(*(w.denominator for w in s.weights.values()))
    r = rng.randrange(den)
    for bits, w in s.weights.items():
        r -= w.numerator * (den // w.denominator)
        if r < 0:
            return OnticState(s.registers, bits)
    raise AssertionError("weights do not sum to one")  # pragma: no cover


def evolve_ontic(x: OnticState, g: ToyCnot) -> OnticState:
    if not x[g.control]:
        return x
    t = x.registers.index(g.target)
    return OnticState(x.registers, x.bits[:t] + (1 - x.bits[t],) + x.bits[t + 1:])


def sample_trajectory(s: EpistemicState, ops: Iterable[ToyCnot], seed: int = 0) -> list[OnticState]:
    """One ontic history: a draw from ``s`` followed through every toy CNOT."""
    x = sample(s, random.Random(seed))
    path = [x]
    for g in ops:
        x = evolve_ontic(x, g)
        path.append(x)
    return path
