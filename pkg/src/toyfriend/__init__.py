"""Exact simulator of a realist toy model for the Wigner's-friend experiment."""

from .ontic import (
    EpistemicState,
    ImpossibleEventError,
    Kind,
    OnticState,
    RegisterId,
    ToyCnot,
    apply_circuit,
    apply_cnot,
    condition,
    marginalize,
    prepare_computational,
    primed,
    reset_uniform,
    tensor,
    unprimed,
)
from .scenario import compare_random_circuits, run_wigner_friend

__version__ = "0.1.0"
