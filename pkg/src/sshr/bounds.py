"""Coset-parity distance tables: admissible bounds for the parity cover search.

Let ``W`` be a subgroup of the n-cube (a set of XOR directions closed under
XOR).  Folding a parity vector ``r`` onto the cosets of ``W`` (each coset gets
the XOR of ``r`` over its points) is GF(2)-linear, so any selection whose rows
XOR to ``r`` folds to a selection whose folded rows XOR to ``fold(r)``, at the
same cost.  The cheapest way to reach ``fold(r)`` with folded rows is
therefore a lower bound on the true completion cost.  With ``2^n / |W| <= 16``
cosets the folded problem has at most ``2^16`` states, small enough to solve
for every state ahead of time.  For ``n <= 4`` ``W`` is trivial and the table
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

INF = np.iinfo(np.int64).max // 4
TABLE_LOG = 4  # folded space has at most 2^TABLE_LOG points


def xor_shortest_paths(width: int, moves: dict[int, int]) -> np.ndarray:
    """Cheapest XOR-combination cost of every ``width``-bit vector (Bellman-Ford)."""
    size = 1 << width
    dist = np.full(size, INF, dtype=np.int64)
    dist[0] = 0
    idx = np.arange(size, dtype=np.int64)
    gens = sorted(moves.items(), key=lambda kv: (kv[1], kv[0]))
    changed = True
    while changed:
        changed = False
        for vec, w in gens:
            cand = dist[idx ^ vec] + w
            if (cand < dist).any():
                np.minimum(dist, cand, out=dist)
                changed = True
    return dist


def span(directions: Sequence[int]) -> list[int]:
    group = [0]
    for v in directions:
        if v not in group:
            group += [g ^ v for g in group]
    return group


def _fold_masks(n: int, group: Sequence[int]) -> list[int]:
    """Point mask of each coset of ``group``, ordered by smallest member."""
    seen = 0
    masks = []
    for x in range(1 << n):
        if (seen >> x) & 1:
            continue
        m = 0
        for g in group:
            m |= 1 << (x ^ g)
        seen |= m
        masks.append(m)
    return masks


def _byte_maps(out_masks: Sequence[int], npts: int) -> tuple[tuple[int, ...], ...]:
    maps = []
    for base in range(0, npts, 8):
        width = min(8, npts - base)
        chunks = [(m >> base) & 0xFF for m in out_masks]
        table = []
        for v in range(1 << width):
            out = 0
            for j, chunk in enumerate(chunks):
                if (chunk & v).bit_count() & 1:
                    out |= 1 << j
            table.append(out)
        maps.append(tuple(table))
    return tuple(maps)


@dataclass(frozen=True)
class FoldPattern:
    directions: tuple[int, ...]
    byte_maps: tuple[tuple[int, ...], ...]
    table: list[int]

    def fold(self, r: int) -> int:
        out = 0
        maps = self.byte_maps
        pos = 0
        while r:
            out ^= maps[pos][r & 0xFF]
            r >>= 8
            pos += 1
        return out

    def bound(self, r: int) -> int:
        return self.table[self.fold(r)]


def build_pattern(
    n: int, directions: Sequence[int], rows: Sequence[int], keys: Sequence[int]
) -> FoldPattern:
    group = span(directions)
    masks = _fold_masks(n, group)
    maps = _byte_maps(masks, 1 << n)
    pattern = FoldPattern(tuple(directions), maps, [])
    moves: dict[int, int] = {}
    for row, key in zip(rows, keys):
        g = pattern.fold(row)
        if g and key < moves.get(g, INF):
            moves[g] = key
    table = xor_shortest_paths(len(masks), moves).tolist()
    return FoldPattern(tuple(directions), maps, table)


def fold_subgroups(n: int, limit: int) -> list[tuple[int, ...]]:
    """Direction sets whose span folds the n-cube down to ``2^TABLE_LOG`` cosets.

    Single-coordinate directions come first, then low-weight combinations, so
    the cheap axis-aligned folds are always among the chosen ones.
    """
    k = n - TABLE_LOG
    if k <= 0:
        return [()]
    vectors = sorted(range(1, 1 << n), key=lambda v: (v.bit_count(), v))
    picked: list[tuple[int, ...]] = []
    seen: set[frozenset[int]] = set()
    for combo in combinations(vectors, k):
        group = frozenset(span(combo))
        if len(group) != 1 << k or group in seen:
            continue
        seen.add(group)
        picked.append(combo)
        if len(picked) >= limit:
            break
    return picked


def default_limit(n: int) -> int:
    return {5: 31, 6: 24, 7: 12, 8: 6}.get(n, 1)


def build_patterns(
    n: int, rows: Sequence[int], keys: Sequence[int], limit: int | None = None
) -> list[FoldPattern]:
    if limit is None:
        limit = default_limit(n)
    if not rows or limit == 0:
        return []
    return [build_pattern(n, dirs, rows, keys) for dirs in fold_subgroups(n, limit)]
