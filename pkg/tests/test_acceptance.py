"""Exit criteria.  Each test prints one ``[PASS]``/``[FAIL]`` line (run with ``-s``)."""

import itertools
import random
from collections import Counter
from fractions import Fraction


from toyfriend import oracle
from toyfriend.agents import AgentView, average, collapse_measure, dynamical_measure, observe_pointer, predict
from toyfriend.circuit import BellMeasure, Cnot, Hadamard, PrepComputational, QuantumCircuit, ReadComputational
from toyfriend.compiler import compile_bell_measurement, compile_circuit, compile_gate, initial_state, invert, toy_ops
from toyfriend.ontic import (
    EpistemicState,
    ToyCnot,
    apply_circuit,
    apply_cnot,
    condition,
    marginalize,
    reset_uniform,
)
from toyfriend.scenario import compare_random_circuits

from refs import PLUS_S, FRIEND_0, FRIEND_1, PRE_INTERACTION, WIGNER, FRIEND_AVERAGE, REVERSED, F, FP, POST_BELL_0, POST_BELL_1, S, SP, registers_for

HALF = Fraction(1, 2)
ORACLE_TOL = 1e-12
BELL = compile_bell_measurement((0, 1))
SPLIT = {"phi+": HALF, "phi-": HALF}


def verdict(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")
    assert ok, f"{name} failed {detail}"


def close(toy, born, tol=ORACLE_TOL):
    keys = set(toy) | set(born)
    return all(abs(float(toy.get(k, 0)) - born.get(k, 0.0)) <= tol for k in keys)


def friend_branches():
    return collapse_measure(AgentView("friend", PRE_INTERACTION), 0, 1)


def wigner_state():
    return dynamical_measure(AgentView("wigner", PRE_INTERACTION), compile_gate(Cnot(0, 1))).state


def test_c1_preparation_hadamard_fidelity():
    c = QuantumCircuit(1, (PrepComputational(0, 0), Hadamard(0)))
    got = apply_circuit(initial_state(c), toy_ops(compile_circuit(c)))
    verdict("C1 preparation/Hadamard fidelity", got == PLUS_S, repr(got))


def test_c2_friend_collapse():
    got = [(b.outcome, b.probability, b.view.state) for b in friend_branches()]
    verdict("C2 friend collapse", got == [("0", HALF, FRIEND_0), ("1", HALF, FRIEND_1)])


def test_c3_wigner_dynamical_account():
    c = QuantumCircuit(2, (PrepComputational(0, 0), PrepComputational(1, 0), Hadamard(0)))
    pre = apply_circuit(initial_state(c), toy_ops(compile_circuit(c)))
    got = wigner_state()
    verdict("C3 Wigner's dynamical account", pre == PRE_INTERACTION and got == WIGNER, repr(got))


def test_c4_averaging_gap():
    avg = average(friend_branches())
    w = wigner_state()
    ok = (
        avg == FRIEND_AVERAGE
        and avg != w
        and marginalize(avg, [S, SP]) == marginalize(w, [S, SP])
        and marginalize(avg, [F, FP]) == marginalize(w, [F, FP])
    )
    verdict("C4 averaging gap", ok)


def test_c5_prediction_conflict():
    w = predict(AgentView("wigner", WIGNER), BELL)
    f0 = predict(AgentView("friend", FRIEND_0), BELL)
    f1 = predict(AgentView("friend", FRIEND_1), BELL)
    verdict("C5 prediction conflict", w == {"phi+": 1} and f0 == SPLIT and f1 == SPLIT, f"{w} {f0} {f1}")


def test_c6_reversal():
    initial = EpistemicState.from_terms((S, SP, F, FP), ["0000", "0001", "0100", "0101"])
    rev = apply_circuit(WIGNER, BELL.toy_ops)
    b0 = apply_circuit(FRIEND_0, BELL.toy_ops)
    b1 = apply_circuit(FRIEND_1, BELL.toy_ops)
    ok = rev == REVERSED == initial and b0 == POST_BELL_0 and b1 == POST_BELL_1
    verdict("C6 reversal", ok)


def test_c7_wigner_observes_friend():
    got = [(b.outcome, b.probability, b.view.state) for b in observe_pointer(AgentView("wigner", WIGNER), 1)]
    verdict("C7 Wigner-observes-friend coincidence", got == [("0", HALF, FRIEND_0), ("1", HALF, FRIEND_1)])


def test_c8_oracle_agreement():
    plus = oracle.simulate(QuantumCircuit(1, (Hadamard(0),)))
    phi = oracle.simulate(QuantumCircuit(2, (Hadamard(0), Cnot(0, 1))))
    bell = BellMeasure(0, 1)
    pairs = [
        (predict(AgentView("friend", PLUS_S), compile_gate(ReadComputational(0))),
         oracle.born_probabilities(plus, ReadComputational(0))),
        (predict(AgentView("wigner", WIGNER), BELL), oracle.born_probabilities(phi, bell)),
        (predict(AgentView("friend", FRIEND_0), BELL),
         oracle.born_probabilities(oracle.collapse_oracle(phi, 0, 0), bell)),
        (predict(AgentView("friend", FRIEND_1), BELL),
         oracle.born_probabilities(oracle.collapse_oracle(phi, 0, 1), bell)),
    ]
    # friend's computational readout of |+> is the branch weight of the collapse
    branch_probs = {b.outcome: b.probability for b in friend_branches()}
    pairs.append((branch_probs, oracle.born_probabilities(plus, ReadComputational(0))))
    ok = all(close(t, b) for t, b in pairs)
    verdict("C8 oracle agreement on the protocol", ok, "; ".join(f"{t} vs {b}" for t, b in pairs))


CASES = 1000


def random_case(rng):
    n = rng.randint(1, 4)
    regs = registers_for(n)
    grid = list(itertools.product((0, 1), repeat=len(regs)))
    support = rng.sample(grid, rng.randint(1, min(12, len(grid))))
    raw = [rng.randint(1, 9) for _ in support]
    state = EpistemicState(regs, {k: Fraction(r, sum(raw)) for k, r in zip(support, raw)})
    ops = [ToyCnot(*rng.sample(regs, 2)) for _ in range(rng.randint(0, 20))]
    return state, ops


def test_c9_property_suite():
    rng = random.Random(20240611)
    failures = Counter()
    for _ in range(CASES):
        s, ops = random_case(rng)
        cur = s
        for g in ops:
            nxt = apply_cnot(cur, g)
            if sum(nxt.weights.values()) != 1:
                failures["normalization"] += 1
            if Counter(nxt.weights.values()) != Counter(cur.weights.values()):
                failures["weight multiset"] += 1
            cur = nxt
        if apply_circuit(cur, invert(ops)) != s:
            failures["inverse"] += 1
        reg = rng.choice(s.registers)
        bit = rng.randint(0, 1)
        if s.probability({reg: bit}):
            post, _ = condition(s, {reg: bit})
            reset = reset_uniform(post, {reg.partner})
            if sum(post.weights.values()) != 1 or sum(reset.weights.values()) != 1:
                failures["normalization"] += 1

    # condition + reset reproduces the collapse branches on the protocol state
    for v, ref in ((0, FRIEND_0), (1, FRIEND_1)):
        post, p = condition(WIGNER, {S: v, F: v})
        if p != HALF or reset_uniform(post, {SP, FP}) != ref:
            failures["condition+reset"] += 1

    # frozen-seed regression of the random toy-vs-Born survey
    recs = compare_random_circuits(1, 100, 2, 6)
    matched = sum(r.match for r in recs)
    if matched != 94 or sum(r.match for r in compare_random_circuits(1, 100, 2, 6)) != matched:
        failures["frozen sweep"] += 1

    verdict("C9 property suite", not failures, f"{CASES} random cases, failures={dict(failures)}, sweep matched {matched}/100")
