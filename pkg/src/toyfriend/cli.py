"""``toyfriend`` command line: run the protocol, simulate DSL files, survey circuits."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import oracle
from .circuit import CircuitError
from .dsl import parse_circuit, render_circuit
from .ontic import EpistemicState
from .scenario import STEP_LABELS, ProtocolReport, compare_random_circuits, max_discrepancy, run_wigner_friend, toy_run


# -- serializers --------------------------------------------------------------


def fraction_json(p: Fraction) -> dict:
    return {"num": p.numerator, "den": p.denominator}


def state_json(s: EpistemicState) -> dict:
    return {
        "registers": [str(r) for r in s.registers],
        "weights": [{"state": "".join(map(str, b)), "p": fraction_json(w)} for b, w in s.weights.items()],
    }


def statevector_json(v: oracle.StateVector | None):
    if v is None:
        return None
    return {"qubits": v.qubit_count, "amplitudes": [[float(a.real), float(a.imag)] for a in v.amplitudes]}


def report_json(rep: ProtocolReport) -> dict:
    return {
        "steps": [
            {
                "label": st.label,
                "agents": {name: state_json(s) for name, s in st.agents.items()},
                "oracle": statevector_json(st.oracle),
                "note": st.note,
            }
            for st in rep.steps
        ],
        "predictions": {a: {k: fraction_json(p) for k, p in d.items()} for a, d in rep.predictions.items()},
        "born": rep.born,
        "verdicts": [
            {"name": v.name, "passed": v.passed, "expected": v.expected, "actual": v.actual} for v in rep.verdicts
        ],
        "all_passed": rep.all_passed,
    }


def render_state(s: EpistemicState) -> list[str]:
    head = " ".join(f"{str(r):>4}" for r in s.registers)
    out = [f"  {head} | p"]
    for bits, w in s.weights.items():
        out.append("  " + " ".join(f"{b:>4}" for b in bits) + f" | {w}")
    return out


def render_dist(d) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in d.items()) + "}"


def render_step(st) -> list[str]:
    out = [f"== {st.label}"]
    if st.note:
        out.append(f"  ({st.note})")
    for name, s in st.agents.items():
        out.append(f" [{name}]")
        out.extend(render_state(s))
    return out


# -- commands -------------------------------------------------------------------


def cmd_run_scenario(args) -> int:
    rep = run_wigner_friend()
    if args.step:
        if args.step not in STEP_LABELS:
            print(f"unknown step {args.step!r}; choose from {', '.join(STEP_LABELS)}", file=sys.stderr)
            return 2
        st = rep.step(args.step)
        if args.format == "json":
            print(json.dumps(report_json(rep)["steps"][rep.steps.index(st)], indent=2))
        else:
            print("\n".join(render_step(st)))
        return 0 if rep.all_passed else 1
    if args.format == "json":
        print(json.dumps(report_json(rep), indent=2))
    else:
        lines = []
        for st in rep.steps:
            lines.extend(render_step(st))
        lines.append("== predictions (Bell measurement unless noted)")
        for agent, d in rep.predictions.items():
            lines.append(f"  {agent:<18} toy {render_dist(d)}")
        lines.append("== verdicts")
        for v in rep.verdicts:
            lines.append(f"  [{'PASS' if v.passed else 'FAIL'}] {v.name}")
        n_ok = sum(v.passed for v in rep.verdicts)
        n = len(rep.verdicts)
        lines.append(f"ALL CHECKS PASSED ({n_ok}/{n})" if rep.all_passed else f"CHECKS FAILED ({n_ok}/{n} passed)")
        print("\n".join(lines))
    return 0 if rep.all_passed else 1


def _load(path: str):
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{path}: file not found")
    text = p.read_text(encoding="utf-8")
    try:
        return parse_circuit(text)
    except CircuitError as e:
        where = f"{path}:{e.line}" if e.line is not None else path
        raise CircuitError(e.code, f"{where}: {e.reason}") from None


def cmd_simulate(args) -> int:
    c = _load(args.file)
    toy = born = None
    if args.model in ("toy", "both"):
        _, toy = toy_run(c)
        print(f"toy:     {render_dist(toy)}")
    if args.model in ("quantum", "both"):
        _, born = oracle.run(c)
        print(f"quantum: {render_dist({k: round(v, 12) for k, v in born.items()})}")
    if toy is not None and born is not None:
        gap = max_discrepancy(toy, born)
        ok = gap <= oracle.TOL
        print(f"match: {'yes' if ok else 'no'} (max discrepancy {gap:.3g})")
        if args.require_match and not ok:
            return 1
    return 0


def cmd_compare(args) -> int:
    include = [_load(f) for f in args.include]
    recs = compare_random_circuits(args.seed, args.count, args.qubits, args.depth, include=include)
    matched = sum(r.match for r in recs)
    print(f"matched {matched}/{len(recs)}")
    bad = next((r for r in recs if not r.match), None)
    if bad is not None:
        print("first mismatch:")
        print(render_circuit(bad.circuit), end="")
        print(f"toy:     {render_dist(bad.toy_distribution)}")
        print(f"quantum: {render_dist({k: round(v, 12) for k, v in bad.born_distribution.items()})}")
    return 0


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toyfriend", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the Wigner's-friend protocol and check every verdict")
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.add_argument("--step", help="print only this step", metavar="LABEL")
    run.set_defaults(func=cmd_run_scenario)

    sim = sub.add_parser("simulate", help="simulate a circuit file")
    sim.add_argument("file")
    sim.add_argument("--model", choices=("toy", "quantum", "both"), default="both")
    sim.add_argument("--require-match", action="store_true")
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="compare toy and Born outcomes on random circuits")
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--count", type=_nonneg, default=100)
    cmp_.add_argument("--qubits", type=_positive, default=3)
    cmp_.add_argument("--depth", type=_positive, default=8)
    cmp_.add_argument("--include", action="append", default=[], metavar="FILE")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, CircuitError) as e:
        print(f"toyfriend: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
