"""Weighted parity set cover over a parallelotope family (SSHR-I).

Pick candidate sets so that every on-set point is covered an odd number of
times and every off-set point an even number of times, at minimum cost.  The
solver is an anytime depth-first branch and bound:

* Weights are compared as one integer ``primary * M + secondary`` with ``M``
  larger than any reachable secondary total, which is exactly the
  lexicographic order (primary objective, tie-break).
* Candidates with zero primary weight (the full cube, and the hyperplanes
  under a T-count objective) span a small GF(2) subspace ``Z``.  Their
  cheapest combination for each ``z`` in ``Z`` is precomputed, and the search
  proper runs over positive-weight candidates for every target ``t ^ z``.
  Without this split the zero-weight full cube makes every covering bound 0.
* Branching picks the residual point with the fewest live candidates and
  enumerates which of them is the first one used; later siblings exclude the
  earlier ones, so the branches partition the search space.
* Bounds are the larger of a point-packing bound and coset-parity distance
  tables (``bounds``).  The tables are linear in the residual, so all children
  of a node are bounded in one vectorised step and explored best-bound first,
  which finds good incumbents early when the search is cut off.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .boolfn import BoolFn
from .bounds import FoldPattern, build_patterns
from .circuit import CNOT_AIM, Objective, block_weights
from .greedy import GreedyConfig, SynthesisResult, greedy_select, make_result
from .ptope import FamilyKind, Parallelotope, PtopeFamily, enumerate_all

OPTIMAL = "optimal"
TIMEOUT = "feasible-timeout"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class CoverInstance:
    n: int
    target: int
    family: PtopeFamily
    cnot: tuple[int, ...]
    tcount: tuple[int, ...]
    objective: Objective = CNOT_AIM

    @property
    def rows(self) -> tuple[int, ...]:
        return self.family.rows

    @property
    def kind(self) -> FamilyKind:
        return self.family.kind

    def __len__(self) -> int:
        return len(self.family)

    def weight(self, i: int) -> int:
        return self.objective.primary(self.cnot[i], self.tcount[i])

    def tie(self, i: int) -> int:
        return self.objective.secondary(self.cnot[i], self.tcount[i])

    def cost(self, indices: Iterable[int]) -> tuple[int, int]:
        idx = list(indices)
        return sum(self.weight(i) for i in idx), sum(self.tie(i) for i in idx)

    def parity(self, indices: Iterable[int]) -> int:
        acc = 0
        for i in indices:
            acc ^= self.rows[i]
        return acc


@dataclass
class CoverSolution:
    indices: tuple[int, ...]
    tc: int
    tie: int = 0
    status: str = OPTIMAL
    wall_ms: float = 0.0
    nodes: int = 0
    log: list[tuple[float, int, int]] = field(default_factory=list)


def _weights(family: PtopeFamily) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pairs = [block_weights(p) for p in family]
    return tuple(c for c, _ in pairs), tuple(t for _, t in pairs)


_WEIGHT_CACHE: dict[tuple[int, FamilyKind], tuple] = {}


def build_instance(
    f: BoolFn, family: PtopeFamily, objective: Objective = CNOT_AIM
) -> CoverInstance:
    if family.n != f.n:
        raise ValueError(f"family is {family.n}-dimensional, function has {f.n} inputs")
    if objective.alpha == 0 and objective.beta == 0:
        raise ValueError("objective must weight CNOT or T gates")
    key = (family.n, family.kind)
    if key not in _WEIGHT_CACHE:
        _WEIGHT_CACHE[key] = _weights(family)
    cnot, tcount = _WEIGHT_CACHE[key]
    return CoverInstance(f.n, f.table, family, cnot, tcount, objective)


def verify_solution(inst: CoverInstance, sol: CoverSolution) -> bool:
    idx = list(sol.indices)
    if any(not 0 <= i < len(inst) for i in idx) or len(set(idx)) != len(idx):
        return False
    if inst.parity(idx) != inst.target:
        return False
    return inst.cost(idx) == (sol.tc, sol.tie)


class _Stop(Exception):
    pass


@dataclass
class _Tables:
    """Per-(family, objective) search data shared by every solve."""

    scale: int
    keys: list[int]  # primary * scale + secondary, per family index
    zero_idx: tuple[int, ...]
    # positive-weight candidates, sorted by key so bit order is cost order
    pos_idx: list[int]
    pos_keys: list[int]
    pos_rows: list[int]
    containing: list[int]  # point -> bitmask over positive candidates
    patterns: list[FoldPattern]
    span: dict[int, tuple[int, tuple[int, ...]]]
    # vectorised form of the patterns: folded candidate rows and the stacked
    # distance tables, so every child of a node is bounded in one numpy call
    key_array: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    folded_rows: np.ndarray = field(default_factory=lambda: np.zeros((0, 0), dtype=np.int64))
    table_stack: np.ndarray = field(default_factory=lambda: np.zeros((0, 1), dtype=np.int64))

    def fold(self, r: int) -> np.ndarray:
        return np.array([p.fold(r) for p in self.patterns], dtype=np.int64)

    def table_bound(self, folded: np.ndarray) -> int:
        if not len(self.patterns):
            return 0
        return int(self.table_stack[np.arange(len(self.patterns)), folded].max())


_TABLES: dict[tuple, _Tables] = {}


def _tables(inst: CoverInstance, fold_limit: int | None = None) -> _Tables:
    cache_key = (inst.n, inst.kind, inst.objective, fold_limit)
    if cache_key in _TABLES:
        return _TABLES[cache_key]
    m = len(inst)
    rows = inst.rows
    sec = [inst.tie(i) for i in range(m)]
    scale = sum(sec) + 1
    keys = [inst.weight(i) * scale + sec[i] for i in range(m)]
    zero_idx = tuple(i for i in range(m) if inst.weight(i) == 0)
    pos_idx = sorted((i for i in range(m) if inst.weight(i) > 0), key=lambda i: (keys[i], i))
    pos_rows = [rows[i] for i in pos_idx]
    containing = [0] * (1 << inst.n)
    for bit, row in enumerate(pos_rows):
        for x in _bits(row):
            containing[x] |= 1 << bit
    pos_keys = [keys[i] for i in pos_idx]
    tabs = _Tables(
        scale=scale,
        keys=keys,
        zero_idx=zero_idx,
        pos_idx=pos_idx,
        pos_keys=pos_keys,
        pos_rows=pos_rows,
        containing=containing,
        patterns=build_patterns(inst.n, pos_rows, pos_keys, fold_limit),
        span={},
    )
    tabs.span = _zero_span(rows, keys, zero_idx)
    tabs.key_array = np.array(pos_keys, dtype=np.int64)
    if tabs.patterns:
        tabs.folded_rows = np.array(
            [[p.fold(row) for row in pos_rows] for p in tabs.patterns], dtype=np.int64
        )
        tabs.table_stack = np.array([p.table for p in tabs.patterns], dtype=np.int64)
    _TABLES[cache_key] = tabs
    return tabs


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _zero_span(rows, keys, zero_idx) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Cheapest zero-primary combination for every parity vector they span.

    Dijkstra over the span; with nonnegative weights no shortest path uses a
    generator twice, so paths are subsets.
    """
    best: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    heap = [(0, 0)]
    done = set()
    while heap:
        cost, vec = heapq.heappop(heap)
        if vec in done:
            continue
        done.add(vec)
        used = best[vec][1]
        for i in zero_idx:
            nxt = vec ^ rows[i]
            c = cost + keys[i]
            if nxt not in best or c < best[nxt][0]:
                best[nxt] = (c, tuple(sorted(used + (i,))))
                heapq.heappush(heap, (c, nxt))
    return best


def packing_bound(tabs: _Tables, r: int, live: int) -> int:
    """Point-packing bound on completing residual ``r`` with ``live`` candidates.

    Residual points that no single live candidate covers together each need
    their own candidate, so their cheapest live containing keys add up.
    Candidate bits are in key order, so the cheapest is the lowest bit.
    Returns a huge value if some residual point has no live candidate.
    """
    containing = tabs.containing
    keys = tabs.pos_keys
    cheapest = []
    for x in _bits(r):
        m = containing[x] & live
        if not m:
            return INFEASIBLE_BOUND
        cheapest.append((keys[(m & -m).bit_length() - 1], m))
    cheapest.sort(key=lambda t: -t[0])
    packed = 0
    blocked = 0
    for key, m in cheapest:
        if not m & blocked:
            packed += key
            blocked |= m
    return packed


def lower_bound(tabs: _Tables, r: int, live: int) -> int:
    """Admissible bound: the larger of point packing and the coset tables.

    The coset tables (see ``bounds``) respect parity but ignore which
    candidates are still live; packing is the other way round.
    """
    return max(packing_bound(tabs, r, live), tabs.table_bound(tabs.fold(r)))


INFEASIBLE_BOUND = 1 << 62


def solve(
    inst: CoverInstance,
    time_limit: float = 120.0,
    incumbent: CoverSolution | Sequence[int] | None = None,
    *,
    extra_incumbents: Iterable[Sequence[int]] = (),
    node_limit: int | None = None,
    warm_start: bool = True,
    fold_limit: int | None = None,
) -> CoverSolution:
    if time_limit is None or not time_limit > 0:
        raise ValueError(f"time limit must be positive, got {time_limit!r}")
    # family tables are a per-process precomputation shared by every function,
    # so they are built before the clock starts
    tabs = _tables(inst, fold_limit)
    start = time.perf_counter()
    deadline = start + time_limit

    starts: list[tuple[int, ...]] = []
    if incumbent is not None:
        if isinstance(incumbent, CoverSolution):
            if not verify_solution(inst, incumbent):
                raise ValueError("incumbent does not satisfy the parity constraints")
            starts.append(tuple(incumbent.indices))
        else:
            starts.append(tuple(incumbent))
    starts.extend(tuple(e) for e in extra_incumbents)
    for idx in starts:
        if len(set(idx)) != len(idx) or inst.parity(idx) != inst.target:
            raise ValueError("incumbent does not satisfy the parity constraints")
    if warm_start:
        f = BoolFn(inst.n, inst.target)
        chosen, _ = greedy_select(f, GreedyConfig(kind=inst.kind, objective=inst.objective))
        starts.append(_cancel_pairs(chosen))

    scale = tabs.scale
    keys = tabs.keys
    pos_idx = tabs.pos_idx
    pos_keys = tabs.pos_keys
    pos_rows = tabs.pos_rows
    containing = tabs.containing

    best_key = INFEASIBLE_BOUND
    best: tuple[int, ...] | None = None
    for idx in starts:
        k = sum(keys[i] for i in idx)
        if k < best_key:
            best_key, best = k, tuple(sorted(idx))
    nodes = 0
    log: list[tuple[float, int, int]] = []

    def record(key: int, idx: tuple[int, ...]) -> None:
        nonlocal best_key, best
        best_key, best = key, tuple(sorted(idx))
        log.append(((time.perf_counter() - start) * 1000, key // scale, nodes))

    if best is not None:
        record(best_key, best)

    key_array = tabs.key_array
    folded_rows = tabs.folded_rows
    table_stack = tabs.table_stack
    lanes = np.arange(len(tabs.patterns))[:, None]

    def dfs(
        r: int, g: int, h: int, live: int, folded: np.ndarray, chosen: list[int], zsel: tuple[int, ...]
    ) -> None:
        # h is the coset-table bound of r, computed by the parent
        nonlocal nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _Stop
        if time.perf_counter() > deadline:
            raise _Stop
        if r == 0:
            if g < best_key:
                record(g, zsel + tuple(pos_idx[c] for c in chosen))
            return
        if g + max(h, packing_bound(tabs, r, live)) >= best_key:
            return
        # the residual point with the fewest live candidates must be covered
        # by one of them; branch on which is the first one used
        branch = 0
        fewest = None
        for x in _bits(r):
            m = containing[x] & live
            cnt = m.bit_count()
            if fewest is None or cnt < fewest:
                fewest, branch = cnt, m
        cands = np.fromiter(_bits(branch), dtype=np.int64, count=fewest)
        kc = key_array[cands]
        keep = g + kc < best_key
        cands, kc = cands[keep], kc[keep]
        if lanes.size:
            child_folded = folded[:, None] ^ folded_rows[:, cands]
            hs = table_stack[lanes, child_folded].max(axis=0)
        else:
            child_folded = np.zeros((0, len(cands)), dtype=np.int64)
            hs = np.zeros(len(cands), dtype=np.int64)
        f = g + kc + hs
        # most promising child first; the exclusion of earlier siblings follows
        # this order, which keeps the branches disjoint and exhaustive
        child = live
        for j in np.lexsort((cands, f)).tolist():
            if f[j] >= best_key:
                break
            c = int(cands[j])
            child &= ~(1 << c)
            chosen.append(c)
            dfs(r ^ pos_rows[c], g + int(kc[j]), int(hs[j]), child, child_folded[:, j], chosen, zsel)
            chosen.pop()

    status = OPTIMAL
    live0 = (1 << len(pos_idx)) - 1
    try:
        order = []
        for z, (cost0, zsel) in tabs.span.items():
            r = inst.target ^ z
            folded = tabs.fold(r)
            h = tabs.table_bound(folded)
            bound = max(h, packing_bound(tabs, r, live0))
            order.append((cost0 + bound, cost0, z, zsel, h, folded))
        order.sort(key=lambda t: (t[0], t[1], t[2]))
        for root_bound, cost0, z, zsel, h, folded in order:
            if root_bound >= best_key:
                continue
            dfs(inst.target ^ z, cost0, h, live0, folded, [], zsel)
    except _Stop:
        status = TIMEOUT

    wall = (time.perf_counter() - start) * 1000
    if best is None:
        return CoverSolution((), 0, 0, INFEASIBLE, wall, nodes, log)
    tc, tie = inst.cost(best)
    sol = CoverSolution(best, tc, tie, status, wall, nodes, log)
    if not verify_solution(inst, sol):
        raise AssertionError("solver produced a solution violating the parity constraints")
    return sol


def _cancel_pairs(indices: Iterable[int]) -> tuple[int, ...]:
    """A set chosen twice contributes nothing; keep the odd-multiplicity ones."""
    odd: set[int] = set()
    for i in indices:
        odd ^= {i}
    return tuple(sorted(odd))


def export_lp(inst: CoverInstance, with_integer_helpers: bool = True) -> str:
    """CPLEX LP rendering of the parity cover model."""
    m = len(inst)
    npts = 1 << inst.n
    lines = [
        f"\\ weighted parity set cover: n={inst.n} target=0x{inst.target:x}"
        f" family={inst.kind.value} objective={inst.objective.name}",
        "Minimize",
    ]
    terms = [f"{inst.weight(i)} x{i}" for i in range(m) if inst.weight(i)]
    lines.append(" obj: " + (" + ".join(terms) if terms else "0 x0"))
    lines.append("Subject To")
    rows = inst.rows
    members = [[i for i in range(m) if (rows[i] >> j) & 1] for j in range(npts)]
    for j in range(npts):
        cover = " - ".join(f"x{i}" for i in members[j])
        odd = (inst.target >> j) & 1
        helper = f"y{j}" if odd else f"z{j}"
        if with_integer_helpers:
            lines.append(f" cover{j}: V{j} - {cover} = 0")
            lines.append(f" parity{j}: V{j} - 2 {helper} = {odd}")
        else:
            lines.append(f" parity{j}: {' + '.join(f'x{i}' for i in members[j])} - 2 {helper} = {odd}")
    lines.append("Bounds")
    for j in range(npts):
        helper = f"y{j}" if (inst.target >> j) & 1 else f"z{j}"
        cap = len(members[j])
        if with_integer_helpers:
            lines.append(f" 0 <= V{j} <= {cap}")
        lines.append(f" 0 <= {helper} <= {cap // 2}")
    lines.append("General")
    for j in range(npts):
        helper = f"y{j}" if (inst.target >> j) & 1 else f"z{j}"
        lines.append(f" V{j} {helper}" if with_integer_helpers else f" {helper}")
    lines.append("Binary")
    for i in range(m):
        lines.append(f" x{i}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def read_solution_file(text: str) -> list[int]:
    """Family indices separated by whitespace or commas; ``#`` starts a comment."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    return [int(tok) for tok in body.replace(",", " ").split()]


def solution_from_indices(inst: CoverInstance, indices: Iterable[int]) -> CoverSolution:
    idx = tuple(indices)
    if any(not 0 <= i < len(inst) for i in idx):
        raise ValueError("solution index out of range")
    tc, tie = inst.cost(idx)
    return CoverSolution(idx, tc, tie, status="external")


METHOD_KIND = {
    "sshr-i": FamilyKind.FULL,
    "esop-i": FamilyKind.SUBCUBE,
    "sshr-h": FamilyKind.FULL,
    "esop-h": FamilyKind.SUBCUBE,
    "minterm": FamilyKind.MINTERM,
}


def synth_exact(
    f: BoolFn,
    kind: FamilyKind = FamilyKind.FULL,
    objective: Objective = CNOT_AIM,
    time_limit: float = 120.0,
    *,
    seeds: Iterable[Sequence[Parallelotope]] = (),
    node_limit: int | None = None,
) -> SynthesisResult:
    """Solve the parity cover for ``f`` and stitch one block per chosen set.

    ``seeds`` are known selections (possibly from a sub-family) used as extra
    starting incumbents; they never change the optimum, only how fast it is
    proven.
    """
    kind = FamilyKind(kind)
    family = enumerate_all(f.n, kind)
    inst = build_instance(f, family, objective)
    extra = []
    for seed in seeds:
        try:
            extra.append(_cancel_pairs(family.index(p) for p in seed))
        except KeyError:
            raise ValueError("seed selection uses parallelotopes outside the family") from None
    sol = solve(inst, time_limit, extra_incumbents=extra, node_limit=node_limit)
    method = {FamilyKind.FULL: "sshr-i", FamilyKind.SUBCUBE: "esop-i", FamilyKind.MINTERM: "minterm"}[kind]
    result = make_result(
        f,
        method,
        family,
        list(sol.indices),
        objective,
        status=sol.status,
        nodes=sol.nodes,
        log=sol.log,
    )
    result.wall_ms = sol.wall_ms
    result.iterations = len(sol.indices)
    return result
