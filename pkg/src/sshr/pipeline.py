"""Method dispatch, corpus handling and report rows shared by the CLI and scripts."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .boolfn import BoolFn, all_functions, parse_function, random_corpus
from .circuit import CNOT_AIM, T_AIM, GateStats, Objective
from .greedy import GreedyConfig, SynthesisResult, synth_greedy
from .paritycover import METHOD_KIND, synth_exact
from .ptope import FamilyKind

METHODS = ("minterm", "esop-h", "esop-i", "sshr-h", "sshr-i")
EXACT = ("esop-i", "sshr-i")

TIME_LIMIT_ENV = "SSHR_TIME_LIMIT"
# node budget per second of time limit when the search must not look at the clock
NODES_PER_SECOND = 5000

MCT_COLUMNS = tuple(range(2, 9))
CSV_HEADER = (
    ["n", "id", "method", "x", "cnot"]
    + [f"mct{k}" for k in MCT_COLUMNS]
    + ["t", "h", "cnot_total", "ancilla_max", "ancilla_sum", "wall_ms"]
)


def default_time_limit() -> float:
    raw = os.environ.get(TIME_LIMIT_ENV)
    if raw is None:
        return 120.0
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{TIME_LIMIT_ENV}={raw!r} is not a number") from None
    if not value > 0:
        raise ValueError(f"{TIME_LIMIT_ENV} must be positive")
    return value


def parse_objective(text: str) -> Objective:
    """``cnot``, ``tcount``, or ``weighted:A,B`` / ``A,B`` for ``A*CNOT + B*T``."""
    t = text.strip().lower()
    if t in ("cnot", "cnot-aim"):
        return CNOT_AIM
    if t in ("tcount", "t", "t-aim"):
        return T_AIM
    m = re.fullmatch(r"(?:weighted[:(]?)?\s*(\d+)\s*,\s*(\d+)\s*\)?", t)
    if not m:
        raise ValueError(f"unknown objective {text!r}")
    alpha, beta = int(m.group(1)), int(m.group(2))
    if alpha == 0 and beta == 0:
        raise ValueError("weighted objective needs a nonzero weight")
    return Objective.weighted(alpha, beta)


@dataclass(frozen=True)
class RunConfig:
    n: int
    method: str = "sshr-h"
    objective: Objective = CNOT_AIM
    ratio: Fraction = Fraction(3, 4)
    time_limit: float = 120.0
    node_limit: int | None = None
    seed: int = 0
    fmt: str = "qasm"
    deterministic: bool = False

    def __post_init__(self) -> None:
        if self.method not in METHOD_KIND:
            raise ValueError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if not self.time_limit > 0:
            raise ValueError("time limit must be positive")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node limit must be positive")
        if self.fmt not in ("qasm", "json"):
            raise ValueError(f"unsupported format {self.fmt!r}")
        object.__setattr__(self, "ratio", GreedyConfig(ratio=self.ratio).ratio)

    @property
    def kind(self) -> FamilyKind:
        return METHOD_KIND[self.method]

    def budget(self) -> tuple[float, int | None]:
        """(time limit, node limit) handed to the exact solver.

        In deterministic mode the wall clock is ignored and the time limit is
        converted to a node budget, so the search order alone fixes the answer.
        """
        if not self.deterministic:
            return self.time_limit, self.node_limit
        nodes = self.node_limit or max(1, round(self.time_limit * NODES_PER_SECOND))
        return math.inf, nodes

    def with_method(self, method: str) -> RunConfig:
        return replace(self, method=method)


def synthesize(f: BoolFn, cfg: RunConfig, seeds: Iterable[SynthesisResult] = ()) -> SynthesisResult:
    """Run ``cfg.method`` on ``f``; exact methods also start from cheap greedy seeds."""
    if f.n != cfg.n:
        raise ValueError(f"function has {f.n} inputs, config says {cfg.n}")
    if cfg.method not in EXACT:
        result = synth_greedy(f, GreedyConfig(cfg.ratio, cfg.kind, cfg.objective))
    else:
        seed_sel = [s.selected for s in seeds]
        # every smaller family's greedy answer is feasible here too
        for sub in ("minterm", "esop-h") if cfg.kind is FamilyKind.FULL else ("minterm",):
            seed_sel.append(synth_greedy(f, GreedyConfig(cfg.ratio, METHOD_KIND[sub], cfg.objective)).selected)
        seed_sel.append(synth_greedy(f, GreedyConfig(cfg.ratio, cfg.kind, cfg.objective)).selected)
        time_limit, node_limit = cfg.budget()
        result = synth_exact(f, cfg.kind, cfg.objective, time_limit, seeds=seed_sel, node_limit=node_limit)
    if cfg.deterministic:
        result.wall_ms = 0.0
        result.log = [(0.0, tc, nodes) for _, tc, nodes in result.log]
    return result


def compare(f: BoolFn, cfg: RunConfig) -> dict[str, SynthesisResult]:
    """All five methods on ``f``; each exact run is seeded by the runs it must beat."""
    out: dict[str, SynthesisResult] = {}
    out["minterm"] = synthesize(f, cfg.with_method("minterm"))
    out["esop-h"] = synthesize(f, cfg.with_method("esop-h"))
    out["esop-i"] = synthesize(f, cfg.with_method("esop-i"), [out["minterm"], out["esop-h"]])
    out["sshr-h"] = synthesize(f, cfg.with_method("sshr-h"))
    out["sshr-i"] = synthesize(f, cfg.with_method("sshr-i"), [out["esop-i"], out["sshr-h"]])
    return out


def dominance_violations(results: dict[str, SynthesisResult]) -> list[str]:
    tc = {m: r.tc for m, r in results.items()}
    checks = [("sshr-i", "esop-i"), ("esop-i", "minterm"), ("sshr-i", "sshr-h"), ("esop-i", "esop-h")]
    return [f"{a} TC {tc[a]} > {b} TC {tc[b]}" for a, b in checks if tc[a] > tc[b]]


def stats_row(n: int, fid: str, method: str, s: GateStats, wall_ms: float) -> list[str]:
    row = [str(n), fid, method, str(s.x_count), str(s.cnot_count)]
    row += [str(s.mct_histogram.get(k, 0)) for k in MCT_COLUMNS]
    row += [str(s.t_count), str(s.h_count), str(s.cnot_total), str(s.ancilla_max), str(s.ancilla_sum)]
    row.append(f"{wall_ms:.3f}")
    return row


def result_row(result: SynthesisResult) -> list[str]:
    return stats_row(result.f.n, result.f.hex_id, result.method, result.stats, result.wall_ms)


def aggregate_row(n: int, method: str, results: Sequence[SynthesisResult]) -> list[str]:
    total = sum((r.stats for r in results), GateStats())
    return stats_row(n, "TOTAL", method, total, sum(r.wall_ms for r in results))


def gain(ours: int, baseline: int) -> str:
    """Relative reduction ``1 - ours/baseline`` in percent."""
    if baseline == 0:
        return "0.0" if ours == 0 else "-inf"
    return f"{100 * (1 - ours / baseline):.1f}"


BASELINES = ("minterm", "esop-h", "esop-i", "sshr-h")
COMPARE_HEADER = (
    ["n", "id"]
    + [f"{m}_{col}" for m in METHODS for col in ("t", "cnot", "anc")]
    + [f"gain_vs_{m}" for m in BASELINES]
)


def compare_row(n: int, fid: str, totals: dict[str, GateStats]) -> list[str]:
    """T-count, decomposed CNOT and ancilla per method, then sshr-i's CNOT gains."""
    row = [str(n), fid]
    for m in METHODS:
        s = totals[m]
        row += [str(s.t_count), str(s.cnot_total), str(s.ancilla_max)]
    ours = totals["sshr-i"].cnot_total
    row += [gain(ours, totals[m].cnot_total) for m in BASELINES]
    return row


def corpus(source: str, n: int, seed: int) -> list[BoolFn]:
    """``all``, ``random:COUNT``, or ``file:PATH`` (one function source per line)."""
    kind, _, arg = source.partition(":")
    if kind == "all":
        if n > 4:
            raise ValueError("corpus 'all' is limited to n <= 4")
        return list(all_functions(n))
    if kind == "random":
        try:
            count = int(arg)
        except ValueError:
            raise ValueError(f"bad corpus size in {source!r}") from None
        return random_corpus(n, count, seed)
    if kind == "file":
        lines = Path(arg).read_text().splitlines()
        return [parse_function(s, n) for s in lines if s.strip() and not s.lstrip().startswith("#")]
    raise ValueError(f"unknown corpus {source!r}")
