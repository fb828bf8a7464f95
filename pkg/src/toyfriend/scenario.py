"""The Wigner's-friend protocol run end to end, plus toy-vs-Born sweeps.

Qubit 0 is the system ``S`` and qubit 1 the friend's memory ``F``.  Ontic
bit strings below are ordered ``S S' F F'``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .agents import (
    AgentView,
    average,
    collapse_measure,
    dynamical_measure,
    observe_pointer,
    outcome_distribution,
    predict,
)
from .circuit import (
    BellMeasure,
    Cnot,
    Hadamard,
    PrepComputational,
    QuantumCircuit,
    ReadComputational,
)
from .compiler import compile_bell_measurement, compile_circuit, compile_gate, initial_state
from .ontic import (
    EpistemicState,
    apply_circuit,
    marginalize,
    prepare_computational,
    qubit_registers,
    tensor,
)

SYSTEM, FRIEND = 0, 1
S_REGS = qubit_registers(SYSTEM)
F_REGS = qubit_registers(FRIEND)
SF_REGS = S_REGS + F_REGS


def _sf(*terms: str) -> EpistemicState:
    return EpistemicState.from_terms(SF_REGS, terms)


# literal four-register distributions of the protocol, equal weights per term
REFERENCE = {
    "prep_system": EpistemicState.from_terms(S_REGS, ["00", "01"]),
    "post_hadamard": EpistemicState.from_terms(S_REGS, ["00", "11"]),
    "pre_interaction": _sf("0000", "0001", "1100", "1101"),
    "friend_branch_0": _sf("0000", "0001", "0100", "0101"),
    "friend_branch_1": _sf("1010", "1011", "1110", "1111"),
    "wigner_post_interaction": _sf("0000", "0101", "1110", "1011"),
    "friend_average": _sf("0000", "0001", "0100", "0101", "1010", "1011", "1110", "1111"),
    "bell_reversal": _sf("0000", "0001", "0100", "0101"),
    "friend_branch_0_bell": _sf("0000", "1100", "1101", "0001"),
    "friend_branch_1_bell": _sf("1000", "0100", "0101", "1001"),
}

STEP_LABELS = tuple(REFERENCE)
HALF = Fraction(1, 2)
PHI_SPLIT = {"phi+": HALF, "phi-": HALF}

PROTOCOL_DSL = """\
qubits 2
prep q0 0
prep q1 0
h q0
cnot q0 q1
bellmeas q0 q1
"""


def protocol_circuit() -> QuantumCircuit:
    return QuantumCircuit(
        2,
        (
            PrepComputational(SYSTEM, 0),
            PrepComputational(FRIEND, 0),
            Hadamard(SYSTEM),
            Cnot(SYSTEM, FRIEND),
            BellMeasure(SYSTEM, FRIEND),
        ),
    )


@dataclass
class Step:
    label: str
    agents: dict[str, EpistemicState]
    oracle: oracle.StateVector | None = None
    note: str | None = None


@dataclass
class Verdict:
    name: str
    passed: bool
    expected: str
    actual: str


@dataclass
class ProtocolReport:
    steps: list[Step] = field(default_factory=list)
    predictions: dict[str, dict[str, Fraction]] = field(default_factory=dict)
    born: dict[str, dict[str, float]] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def step(self, label: str) -> Step:
        for s in self.steps:
            if s.label == label:
                return s
        raise KeyError(label)

    def check(self, name, expected, actual, passed=None):
        if passed is None:
            passed = expected == actual
        self.verdicts.append(Verdict(name, bool(passed), _show(expected), _show(actual)))


def _show(x) -> str:
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_show(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_show(v) for v in x) + "]"
    return str(x)


def _close(toy: dict[str, Fraction], born: dict[str, float], tol: float = oracle.TOL) -> bool:
    return max_discrepancy(toy, born) <= tol


def max_discrepancy(toy: dict[str, Fraction], born: dict[str, float]) -> float:
    keys = set(toy) | set(born)
    return max((abs(float(toy.get(k, 0)) - born.get(k, 0.0)) for k in keys), default=0.0)


def run_wigner_friend() -> ProtocolReport:
    rep = ProtocolReport()
    bell = compile_bell_measurement((SYSTEM, FRIEND))
    read_s = compile_gate(ReadComputational(SYSTEM))
    interaction = compile_gate(Cnot(SYSTEM, FRIEND))
    hadamard = compile_gate(Hadamard(SYSTEM))

    # S alone: preparation, Hadamard
    s0 = prepare_computational(SYSTEM, 0)
    rep.steps.append(Step("prep_system", {"friend": s0, "wigner": s0}, oracle.StateVector.basis((0,))))
    plus = apply_circuit(s0, hadamard.toy_ops)
    q_plus = oracle.apply_hadamard(oracle.StateVector.basis((0,)), 0)
    rep.steps.append(Step("post_hadamard", {"friend": plus, "wigner": plus}, q_plus))

    # S with the friend's memory in the ready state
    ready = prepare_computational(FRIEND, 0)
    pre = tensor(plus, ready)
    q_pre = oracle.apply_hadamard(oracle.StateVector.basis((0, 0)), SYSTEM)
    rep.steps.append(Step("pre_interaction", {"friend": pre, "wigner": pre}, q_pre))

    friend = AgentView("friend", pre, {"measure_q0": False})
    branches = collapse_measure(friend, SYSTEM, FRIEND)
    q_branches = [oracle.apply_cnot(oracle.collapse_oracle(q_pre, SYSTEM, int(b.outcome)), SYSTEM, FRIEND) for b in branches]
    for b, qb in zip(branches, q_branches):
        rep.steps.append(Step(f"friend_branch_{b.outcome}", {"friend": b.view.state}, qb,
                              note=f"probability {b.probability}"))

    wigner = dynamical_measure(AgentView("wigner", pre), interaction)
    q_phi = oracle.apply_cnot(q_pre, SYSTEM, FRIEND)
    rep.steps.append(Step("wigner_post_interaction", {"wigner": wigner.state}, q_phi))

    avg = average(branches)
    rep.steps.append(Step("friend_average", {"friend": avg}, None,
                          note="outcome-averaged friend description (a mixture, no pure oracle state)"))

    reversed_state = apply_circuit(wigner.state, bell.toy_ops)
    q_rev = oracle.apply_hadamard(oracle.apply_cnot(q_phi, SYSTEM, FRIEND), SYSTEM)
    rep.steps.append(Step(
        "bell_reversal", {"wigner": reversed_state, "friend": reversed_state}, q_rev,
        note="the friend's memory is reset to ready; her reconstructed view is the initial state",
    ))

    branch_bell = {}
    for b, qb in zip(branches, q_branches):
        st = apply_circuit(b.view.state, bell.toy_ops)
        branch_bell[b.outcome] = st
        q_after = oracle.apply_hadamard(oracle.apply_cnot(qb, SYSTEM, FRIEND), SYSTEM)
        rep.steps.append(Step(f"friend_branch_{b.outcome}_bell", {"friend": st}, q_after))

    # predictions for the terminal Bell measurement
    rep.predictions["wigner"] = predict(wigner, bell)
    rep.born["wigner"] = oracle.born_probabilities(q_phi, BellMeasure(SYSTEM, FRIEND))
    for b, qb in zip(branches, q_branches):
        rep.predictions[f"friend_branch_{b.outcome}"] = predict(b.view, bell)
        rep.born[f"friend_branch_{b.outcome}"] = oracle.born_probabilities(qb, BellMeasure(SYSTEM, FRIEND))
    rep.predictions["friend_readout"] = predict(AgentView("friend", plus), read_s)
    rep.born["friend_readout"] = oracle.born_probabilities(q_plus, ReadComputational(SYSTEM))

    # verdicts, one per acceptance criterion
    rep.check("hadamard_fidelity", REFERENCE["post_hadamard"], plus)
    got = [(b.outcome, b.probability, b.view.state) for b in branches]
    want = [("0", HALF, REFERENCE["friend_branch_0"]), ("1", HALF, REFERENCE["friend_branch_1"])]
    rep.check("friend_collapse", want, got)
    rep.check("wigner_dynamics", REFERENCE["wigner_post_interaction"], wigner.state,
              passed=pre == REFERENCE["pre_interaction"] and wigner.state == REFERENCE["wigner_post_interaction"])
    marginals_agree = all(marginalize(avg, regs) == marginalize(wigner.state, regs) for regs in (S_REGS, F_REGS))
    rep.check("averaging_gap", REFERENCE["friend_average"], avg,
              passed=avg == REFERENCE["friend_average"] and avg != wigner.state and marginals_agree)
    rep.check("wigner_certainty", {"phi+": Fraction(1)}, rep.predictions["wigner"])
    rep.check("friend_branch_disagreement", [PHI_SPLIT, PHI_SPLIT],
              [rep.predictions["friend_branch_0"], rep.predictions["friend_branch_1"]])
    initial = tensor(s0, ready)
    rep.check("reversal_restores_initial", REFERENCE["bell_reversal"], reversed_state,
              passed=reversed_state == REFERENCE["bell_reversal"] == initial
              and branch_bell == {"0": REFERENCE["friend_branch_0_bell"], "1": REFERENCE["friend_branch_1_bell"]})
    observed = [(b.outcome, b.probability, b.view.state) for b in observe_pointer(wigner, FRIEND)]
    rep.check("wigner_observes_friend", want, observed)
    worst = max(max_discrepancy(rep.predictions[k], rep.born[k]) for k in rep.predictions)
    rep.check("oracle_agreement", f"max discrepancy <= {oracle.TOL}", f"max discrepancy {worst}",
              passed=worst <= oracle.TOL and rep.born["friend_readout"].keys() == {"0", "1"})
    return rep


# -- toy vs Born comparisons -------------------------------------------------


@dataclass
class ComparisonRecord:
    circuit: QuantumCircuit
    toy_distribution: dict[str, Fraction]
    born_distribution: dict[str, float]
    match: bool
    max_discrepancy: float


def toy_run(c: QuantumCircuit) -> tuple[EpistemicState, dict[str, Fraction]]:
    """Toy-model final state (before measurements) and outcome distribution."""
    steps = compile_circuit(c)
    state = initial_state(c)
    unitary = [s for s in steps if not s.is_measurement]
    for s in unitary:
        state = apply_circuit(state, s.toy_ops)
    return state, outcome_distribution(state, [s for s in steps if s.is_measurement])


def compare(c: QuantumCircuit) -> ComparisonRecord:
    _, toy = toy_run(c)
    _, born = oracle.run(c)
    gap = max_discrepancy(toy, born)
    return ComparisonRecord(c, toy, born, gap <= oracle.TOL, gap)


def random_circuit(rng: random.Random, max_qubits: int, max_depth: int) -> QuantumCircuit:
    n = rng.randint(1, max_qubits)
    gates: list = [PrepComputational(q, rng.randint(0, 1)) for q in range(n)]
    for _ in range(rng.randint(1, max_depth)):
        if n > 1 and rng.random() < 0.5:
            a, b = rng.sample(range(n), 2)
            gates.append(Cnot(a, b))
        else:
            gates.append(Hadamard(rng.randrange(n)))
    gates.extend(ReadComputational(q) for q in range(n))
    return QuantumCircuit(n, tuple(gates))


def compare_random_circuits(seed: int, count: int, max_qubits: int = 3, max_depth: int = 8,
                            include=()) -> list[ComparisonRecord]:
    if count < 0 or max_qubits < 1 or max_depth < 1:
        raise ValueError("count must be >= 0, max_qubits and max_depth >= 1")
    rng = random.Random(seed)
    circuits = [random_circuit(rng, max_qubits, max_depth) for _ in range(count)]
    return [compare(c) for c in circuits] + [compare(c) for c in include]
