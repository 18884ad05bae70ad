"""Ratio-threshold greedy cover of the on-set (SSHR-H)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .boolfn import BoolFn, MintermSet, on_set
from .circuit import (
    CNOT_AIM,
    Circuit,
    GateStats,
    Objective,
    block_weights,
    build_blocks,
    stats,
    verify_oracle,
)
from .ptope import FamilyKind, Parallelotope, enumerate_all


@dataclass(frozen=True)
class GreedyConfig:
    ratio: Fraction = Fraction(3, 4)
    kind: FamilyKind = FamilyKind.FULL
    objective: Objective = CNOT_AIM

    def __post_init__(self) -> None:
        r = Fraction(self.ratio)
        if not 0 < r <= 1:
            raise ValueError(f"ratio must lie in (0, 1], got {self.ratio}")
        object.__setattr__(self, "ratio", r)
        object.__setattr__(self, "kind", FamilyKind(self.kind))


@dataclass
class SynthesisResult:
    f: BoolFn
    method: str
    circuit: Circuit
    selected: list[Parallelotope]
    indices: list[int]
    stats: GateStats
    tc: int
    iterations: int = 0
    wall_ms: float = 0.0
    status: str = "heuristic"
    nodes: int = 0
    block_stats: list[GateStats] = field(default_factory=list)
    log: list[tuple[float, int, int]] = field(default_factory=list)


def solution_cost(ptopes, objective: Objective) -> tuple[int, int]:
    """(primary TC, tie-break value) of a selection."""
    cnot = t = 0
    for p in ptopes:
        c, g = block_weights(p)
        cnot += c
        t += g
    return objective.primary(cnot, t), objective.secondary(cnot, t)


def make_result(
    f: BoolFn,
    method: str,
    family,
    indices: list[int],
    objective: Objective,
    **extra,
) -> SynthesisResult:
    selected = [family[i] for i in indices]
    circuit = build_blocks(selected, f.n)
    if not verify_oracle(circuit, f):
        raise AssertionError(f"{method}: synthesized circuit does not implement {f}")
    block_stats = [stats(build_blocks([p], f.n)) for p in selected]
    total = sum(block_stats, GateStats())
    return SynthesisResult(
        f=f,
        method=method,
        circuit=circuit,
        selected=selected,
        indices=list(indices),
        stats=total,
        tc=solution_cost(selected, objective)[0],
        block_stats=block_stats,
        **extra,
    )


@lru_cache(maxsize=None)
def scan_order(n: int, kind: FamilyKind, objective: Objective) -> tuple[int, ...]:
    """Family indices by dimension (high first), then block cost, then family order."""
    family = enumerate_all(n, kind)

    def key(i: int):
        p = family[i]
        c, g = block_weights(p)
        return (-p.dim, objective.primary(c, g), objective.secondary(c, g), i)

    return tuple(sorted(range(len(family)), key=key))


def greedy_select(f: BoolFn, cfg: GreedyConfig) -> tuple[list[int], int]:
    """Family indices chosen by the greedy loop and the iteration count."""
    n = f.n
    family = enumerate_all(n, cfg.kind)
    rows = family.rows
    order = scan_order(n, cfg.kind, cfg.objective)
    num, den = cfg.ratio.numerator, cfg.ratio.denominator
    sizes = [len(family[i]) for i in order]
    cap = 4 << n
    residual = f.table
    chosen: list[int] = []
    while residual:
        if len(chosen) >= cap:
            raise RuntimeError(f"greedy exceeded {cap} iterations on {f}")
        remaining = residual.bit_count()
        pick = None
        for pos, i in enumerate(order):
            size = sizes[pos]
            if num * size > den * remaining:
                continue  # cannot reach the ratio with this few residual points
            hit = (rows[i] & residual).bit_count()
            # 2*hit > size keeps |A| strictly shrinking, implied by ratio > 1/2
            if den * hit >= num * size and 2 * hit > size:
                pick = i
                break
        if pick is None:
            low = (residual & -residual).bit_length() - 1
            pick = family.index(Parallelotope(n, low))
        chosen.append(pick)
        residual ^= rows[pick]
    return chosen, len(chosen)


def synth_greedy(f: BoolFn, cfg: GreedyConfig = GreedyConfig()) -> SynthesisResult:
    start = time.perf_counter()
    chosen, iterations = greedy_select(f, cfg)
    method = {
        FamilyKind.FULL: "sshr-h",
        FamilyKind.SUBCUBE: "esop-h",
        FamilyKind.MINTERM: "minterm",
    }[cfg.kind]
    family = enumerate_all(f.n, cfg.kind)
    result = make_result(f, method, family, chosen, cfg.objective, iterations=iterations)
    result.wall_ms = (time.perf_counter() - start) * 1000
    return result


def residual_trace(selected, f: BoolFn) -> list[MintermSet]:
    """Working set before each selection, ending with the empty set."""
    if isinstance(selected, SynthesisResult):
        if selected.f != f:
            raise ValueError("result was produced for a different function")
        selected = selected.selected
    a = on_set(f)
    trace = [a]
    for p in selected:
        if p.n != f.n:
            raise ValueError("parallelotope dimension does not match the function")
        a = MintermSet(f.n, a.mask ^ p.row)
        trace.append(a)
    if a:
        raise ValueError("selection does not cover the on-set with the right parity")
    return trace
