"""Parallelotopes of the Boolean n-cube and their enumeration.

A parallelotope is ``{a ^ xor(alpha_j for j in T) : T subset of blocks}`` where
each ``alpha_j`` is the indicator of a coordinate block and the blocks are
pairwise disjoint.  Coordinate ``i`` is bit ``i`` of a point (``x0`` is the
least significant bit).  Subcubes are the special case of singleton blocks.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .boolfn import MAX_VARS, MintermSet


class FamilyKind(enum.Enum):
    FULL = "full"
    SUBCUBE = "subcube"
    MINTERM = "minterm"


def _block_mask(block: Iterable[int]) -> int:
    m = 0
    for c in block:
        m |= 1 << c
    return m


@dataclass(frozen=True)
class Parallelotope:
    n: int
    anchor: int
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VARS:
            raise ValueError(f"ambient dimension must be in [1, {MAX_VARS}]")
        if not 0 <= self.anchor < (1 << self.n):
            raise ValueError(f"anchor {self.anchor} outside the {self.n}-cube")
        seen = 0
        blocks = []
        for block in self.blocks:
            block = tuple(sorted(block))
            if not block:
                raise ValueError("empty coordinate block")
            if len(set(block)) != len(block):
                raise ValueError(f"repeated coordinate in block {block}")
            if block[0] < 0 or block[-1] >= self.n:
                raise ValueError(f"block {block} has coordinates outside [0, {self.n})")
            mask = _block_mask(block)
            if seen & mask:
                # basis vectors must have disjoint supports
                raise ValueError(f"block {block} overlaps another block")
            seen |= mask
            blocks.append(block)
        blocks.sort()
        anchor = self.anchor
        for block in blocks:
            if (anchor >> block[0]) & 1:
                anchor ^= _block_mask(block)
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "anchor", anchor)

    @property
    def dim(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def block_masks(self) -> tuple[int, ...]:
        return tuple(_block_mask(b) for b in self.blocks)

    @property
    def support(self) -> int:
        m = 0
        for b in self.block_masks:
            m |= b
        return m

    def points(self) -> list[int]:
        pts = [self.anchor]
        for b in self.block_masks:
            pts += [p ^ b for p in pts]
        return pts

    @property
    def row(self) -> int:
        """Vertex set as a ``2^n``-bit incidence mask."""
        r = 0
        for p in self.points():
            r |= 1 << p
        return r

    def __len__(self) -> int:
        return 1 << self.dim

    def sort_key(self) -> tuple:
        return (-self.dim, self.blocks, self.anchor)

    def __str__(self) -> str:
        return format_ptope(self)


def vertices(p: Parallelotope) -> MintermSet:
    return MintermSet(p.n, p.row)


def contains(p: Parallelotope, x: int) -> bool:
    d = x ^ p.anchor
    for b in p.block_masks:
        part = d & b
        if part and part != b:
            return False
        d ^= part
    return d == 0


def subcube(n: int, anchor: int, free: Iterable[int]) -> Parallelotope:
    return Parallelotope(n, anchor, tuple((c,) for c in free))


def _partial_partitions(n: int, singletons_only: bool) -> Iterator[list[list[int]]]:
    """Every way to pick a subset of coordinates and partition it into blocks."""
    blocks: list[list[int]] = []

    def rec(c: int) -> Iterator[list[list[int]]]:
        if c == n:
            yield [list(b) for b in blocks]
            return
        yield from rec(c + 1)
        blocks.append([c])
        yield from rec(c + 1)
        blocks.pop()
        if not singletons_only:
            for b in blocks:
                b.append(c)
                yield from rec(c + 1)
                b.pop()

    yield from rec(0)


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class PtopeFamily:
    n: int
    kind: FamilyKind
    members: tuple[Parallelotope, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Parallelotope]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Parallelotope:
        return self.members[i]

    @property
    def rows(self) -> tuple[int, ...]:
        return _family_rows(self.n, self.kind)

    def index(self, p: Parallelotope) -> int:
        return _family_index(self.n, self.kind)[p]


@lru_cache(maxsize=None)
def enumerate_all(n: int, kind: FamilyKind = FamilyKind.FULL) -> PtopeFamily:
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"n must be in [1, {MAX_VARS}], got {n}")
    kind = FamilyKind(kind)
    full = (1 << n) - 1
    if kind is FamilyKind.MINTERM:
        members = [Parallelotope(n, a) for a in range(1 << n)]
    else:
        members = []
        for part in _partial_partitions(n, kind is FamilyKind.SUBCUBE):
            blocks = tuple(tuple(b) for b in part)
            reps = 0
            for b in blocks:
                reps |= 1 << b[0]
            for anchor in _submasks(full & ~reps):
                members.append(Parallelotope(n, anchor, blocks))
    members.sort(key=Parallelotope.sort_key)
    return PtopeFamily(n, kind, tuple(members))


@lru_cache(maxsize=None)
def _family_rows(n: int, kind: FamilyKind) -> tuple[int, ...]:
    return tuple(p.row for p in enumerate_all(n, kind))


@lru_cache(maxsize=None)
def _family_index(n: int, kind: FamilyKind) -> dict[Parallelotope, int]:
    return {p: i for i, p in enumerate(enumerate_all(n, kind))}


def _stirling2(k: int, m: int) -> int:
    row = [1] + [0] * m
    for i in range(1, k + 1):
        new = [0] * (m + 1)
        for j in range(1, min(i, m) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[m]


def partial_partition_count(n: int, m: int) -> int:
    """Ways to choose coordinates among ``n`` and split them into ``m`` blocks."""
    return sum(comb(n, k) * _stirling2(k, m) for k in range(m, n + 1))


def count_formula(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return sum(partial_partition_count(n, m) << (n - m) for m in range(n + 1))


def subcube_count(n: int) -> int:
    return sum(comb(n, k) << (n - k) for k in range(n + 1))


_LINE = re.compile(r"^\s*(0x[0-9a-fA-F]+)\s*:\s*(.*?)\s*$")


def format_ptope(p: Parallelotope) -> str:
    blocks = ",".join("{" + ",".join(f"x{c}" for c in b) + "}" for b in p.blocks)
    return f"0x{p.anchor:x} : {blocks}".rstrip()


def parse_ptope(line: str, n: int) -> Parallelotope:
    m = _LINE.match(line)
    if not m:
        raise ValueError(f"malformed parallelotope line {line!r}")
    anchor = int(m.group(1), 16)
    body = m.group(2)
    blocks = []
    for group in re.findall(r"\{([^}]*)\}", body):
        coords = [t.strip() for t in group.split(",") if t.strip()]
        if not all(re.fullmatch(r"x\d+", t) for t in coords):
            raise ValueError(f"bad coordinate list {group!r}")
        blocks.append(tuple(int(t[1:]) for t in coords))
    return Parallelotope(n, anchor, tuple(blocks))


def dump_family(family: PtopeFamily | Sequence[Parallelotope]) -> str:
    return "".join(format_ptope(p) + "\n" for p in family)


def load_family(text: str, n: int) -> list[Parallelotope]:
    return [parse_ptope(line, n) for line in text.splitlines() if line.strip()]
