"""Agent perspectives on the toy model.

An :class:`AgentView` is an epistemic state plus a record of which
interactions the agent tracks dynamically.  Agents that do not track an
interaction apply collapse: condition on what they saw, then take the maximum
entropy distribution over the primed registers.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .circuit import BellMeasure, Cnot, ReadComputational, outcome_key
from .compiler import CompiledStep
from .ontic import (
    EpistemicState,
    apply_circuit,
    assign,
    condition,
    marginalize,
    mixture,
    primed,
    reset_uniform,
    unprimed,
)

READY = 0


class PointerNotReadyError(ValueError):
    pass


@dataclass(frozen=True)
class AgentView:
    name: str
    state: EpistemicState
    tracked_dynamics: Mapping[str, bool] = field(default_factory=dict)

    def with_state(self, state: EpistemicState, **tracked: bool) -> AgentView:
        return replace(self, state=state, tracked_dynamics={**self.tracked_dynamics, **tracked})


@dataclass(frozen=True)
class OutcomeBranch:
    outcome: str
    probability: Fraction
    view: AgentView


def average(branches: list[OutcomeBranch]) -> EpistemicState:
    """Outcome-averaged description of a set of branches."""
    return mixture((b.probability, b.view.state) for b in branches)


def collapse_measure(v: AgentView, system_qubit: int, pointer_qubit: int) -> list[OutcomeBranch]:
    """The friend's account: see S, record it in F, forget S' and F'."""
    s, f = unprimed(system_qubit), unprimed(pointer_qubit)
    if v.state.is_deterministic(f) != READY:
        raise PointerNotReadyError(f"pointer {f} is not deterministically in the ready state {READY}")
    branches = []
    for value in (0, 1):
        p = v.state.probability({s: value})
        if not p:
            continue
        post, _ = condition(v.state, {s: value})
        post = assign(post, {f: value})
        post = reset_uniform(post, {primed(system_qubit), primed(pointer_qubit)})
        branches.append(OutcomeBranch(str(value), p, v.with_state(post, **{f"measure_q{system_qubit}": False})))
    return branches


def dynamical_measure(v: AgentView, interaction: CompiledStep) -> AgentView:
    """Wigner's account: push the state through the interaction, no update."""
    if not isinstance(interaction.source_gate, Cnot):
        raise ValueError(f"dynamical measurement needs a compiled CNOT, got {interaction.source_gate!r}")
    g = interaction.source_gate
    return v.with_state(apply_circuit(v.state, interaction.toy_ops), **{f"measure_q{g.control}": True})


def observe_pointer(v: AgentView, pointer_qubit: int) -> list[OutcomeBranch]:
    """Read the pointer's unprimed bit and forget its primed partner."""
    f = unprimed(pointer_qubit)
    branches = []
    for value in (0, 1):
        p = v.state.probability({f: value})
        if not p:
            continue
        post, _ = condition(v.state, {f: value})
        post = reset_uniform(post, {primed(pointer_qubit)})
        branches.append(OutcomeBranch(str(value), p, v.with_state(post, **{f"observe_q{pointer_qubit}": False})))
    return branches


def outcome_distribution(state: EpistemicState, steps: list[CompiledStep]) -> dict[str, Fraction]:
    """Joint outcome distribution of terminal measurement ``steps`` on ``state``."""
    for st in steps:
        state = apply_circuit(state, st.toy_ops)
    regs = [r for st in steps for r, _ in st.readouts]
    if len(set(regs)) != len(regs):
        raise ValueError("a register is read out twice")
    dist: dict[str, Fraction] = {}
    for bits, w in _ordered_marginal(state, regs):
        reads, bell, pos = [], None, 0
        for st in steps:
            n = len(st.readouts)
            label = st.label_outcome(bits[pos:pos + n])
            if isinstance(st.source_gate, BellMeasure):
                bell = label
            else:
                reads.append(label)
            pos += n
        key = outcome_key(reads, bell)
        dist[key] = dist.get(key, Fraction(0)) + w
    return dict(sorted(dist.items()))


def _ordered_marginal(state: EpistemicState, regs):
    """Marginal weights with bit tuples ordered as ``regs`` (not canonically)."""
    marg = marginalize(state, regs)
    order = [marg.index(r) for r in regs]
    for bits, w in marg.weights.items():
        yield tuple(bits[i] for i in order), w


def predict(v: AgentView, m: CompiledStep) -> dict[str, Fraction]:
    if not isinstance(m.source_gate, (BellMeasure, ReadComputational)):
        raise ValueError(f"prediction needs a terminal measurement, got {m.source_gate!r}")
    return outcome_distribution(v.state, [m])


def after_measurement(v: AgentView, m: CompiledStep) -> list[OutcomeBranch]:
    """The measuring agent's post-measurement branches: evolve, read, forget."""
    state = apply_circuit(v.state, m.toy_ops)
    regs = [r for r, _ in m.readouts]
    branches = []
    for bits, p in _ordered_marginal(state, regs):
        post, _ = condition(state, dict(zip(regs, bits)))
        if m.forget:
            post = reset_uniform(post, m.forget)
        branches.append(OutcomeBranch(m.label_outcome(bits), p, v.with_state(post)))
    return branches
