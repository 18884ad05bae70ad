"""Quantum oracle synthesis by parity covers over parallelotopes."""

from .boolfn import BoolFn, MintermSet, from_hex_id, parse_function
from .circuit import CNOT_AIM, T_AIM, Circuit, Gate, Objective, build_block, verify_oracle
from .greedy import GreedyConfig, SynthesisResult, synth_greedy
from .paritycover import build_instance, solve, synth_exact
from .ptope import FamilyKind, Parallelotope, enumerate_all

__all__ = [
    "BoolFn",
    "MintermSet",
    "from_hex_id",
    "parse_function",
    "CNOT_AIM",
    "T_AIM",
    "Circuit",
    "Gate",
    "Objective",
    "build_block",
    "verify_oracle",
    "GreedyConfig",
    "SynthesisResult",
    "synth_greedy",
    "build_instance",
    "solve",
    "synth_exact",
    "FamilyKind",
    "Parallelotope",
    "enumerate_all",
]
