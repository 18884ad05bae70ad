"""Truth-table Boolean functions, minterm sets and random corpora.

A function on ``n`` inputs is stored as a ``2**n``-bit integer whose bit ``x``
is ``f(x)``.  Minterm sets use the same encoding (bit ``x`` set iff ``x`` is a
member), so set algebra reduces to integer bit operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

MAX_VARS = 8


def _check_n(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_VARS:
        raise ValueError(f"variable count must be in [1, {MAX_VARS}], got {n!r}")


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class MintermSet:
    """A set of points of the n-cube, stored as a bitmask."""

    n: int
    mask: int = 0

    def __post_init__(self) -> None:
        _check_n(self.n)
        if self.mask < 0 or self.mask >> (1 << self.n):
            raise ValueError("minterm set has members outside [0, 2^n)")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> MintermSet:
        mask = 0
        for x in members:
            if not 0 <= x < (1 << n):
                raise ValueError(f"point {x} out of range for n={n}")
            mask |= 1 << x
        return cls(n, mask)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and x >= 0 and bool((self.mask >> x) & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def members(self) -> frozenset[int]:
        return frozenset(self)

    def complement(self) -> MintermSet:
        return MintermSet(self.n, self.mask ^ full_mask(self.n))

    def __xor__(self, other: MintermSet) -> MintermSet:
        return xor_indicator(self, other)

    def __and__(self, other: MintermSet) -> MintermSet:
        if other.n != self.n:
            raise ValueError("mismatched variable counts")
        return MintermSet(self.n, self.mask & other.mask)

    def __repr__(self) -> str:
        return f"MintermSet(n={self.n}, {sorted(self)})"


@dataclass(frozen=True)
class BoolFn:
    """Single-output Boolean function given by its truth table."""

    n: int
    table: int

    def __post_init__(self) -> None:
        _check_n(self.n)
        if self.table < 0 or self.table >> (1 << self.n):
            raise ValueError(f"truth table out of range for n={self.n}")

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.table >> x) & 1 for x in range(1 << self.n))

    def __call__(self, x: int) -> int:
        return (self.table >> x) & 1

    def __len__(self) -> int:
        """Satisfaction count |f|."""
        return self.table.bit_count()

    @property
    def hex_id(self) -> str:
        return to_hex_id(self)

    def __repr__(self) -> str:
        return f"BoolFn(n={self.n}, id={self.hex_id})"


def from_hex_id(text: str, n: int) -> BoolFn:
    _check_n(n)
    s = text.strip().lower()
    if s.startswith("0x"):
        s = s[2:]
    if not s or any(c not in "0123456789abcdef" for c in s):
        raise ValueError(f"malformed hex id {text!r}")
    value = int(s, 16)
    if value >> (1 << n):
        raise ValueError(f"hex id {text!r} does not fit a {n}-variable truth table")
    return BoolFn(n, value)


def to_hex_id(f: BoolFn) -> str:
    return f"0x{f.table:x}"


def from_bitstring(text: str, n: int | None = None) -> BoolFn:
    """Parse ``f_{2^n-1} ... f_1 f_0`` (most significant bit first)."""
    s = text.strip().replace("_", "")
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"malformed bit string {text!r}")
    length = len(s)
    if length & (length - 1):
        raise ValueError(f"bit string length {length} is not a power of two")
    inferred = length.bit_length() - 1
    if n is not None and n != inferred:
        raise ValueError(f"bit string has length {length}, expected {1 << n}")
    return BoolFn(inferred, int(s, 2))


def from_minterms(n: int, minterms: Iterable[int]) -> BoolFn:
    return BoolFn(n, MintermSet.of(n, minterms).mask)


def read_minterm_file(path: str | Path, n: int) -> BoolFn:
    points = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                points.append(int(line, 0))
            except ValueError:
                raise ValueError(f"bad minterm line {line!r} in {path}") from None
    return from_minterms(n, points)


def parse_function(source: str, n: int) -> BoolFn:
    """Accept a hex id, a ``2^n``-long bit string, or a minterm-list file path."""
    s = source.strip()
    if s.lower().startswith("0x"):
        return from_hex_id(s, n)
    if Path(s).is_file():
        return read_minterm_file(s, n)
    if len(s) == (1 << n) and set(s) <= {"0", "1"}:
        return from_bitstring(s, n)
    return from_hex_id(s, n)


def on_set(f: BoolFn) -> MintermSet:
    return MintermSet(f.n, f.table)


def off_set(f: BoolFn) -> MintermSet:
    return MintermSet(f.n, f.table ^ full_mask(f.n))


def xor_indicator(a: MintermSet, p: MintermSet) -> MintermSet:
    """Symmetric difference: flipping coverage parity of every point in ``p``."""
    if a.n != p.n:
        raise ValueError(f"mismatched variable counts {a.n} and {p.n}")
    return MintermSet(a.n, a.mask ^ p.mask)


def random_corpus(n: int, count: int, seed: int) -> list[BoolFn]:
    """Functions with |f| uniform on [1, 2^(n-1)], minterms drawn without replacement."""
    _check_n(n)
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = random.Random(seed)
    size = 1 << n
    corpus = []
    for _ in range(count):
        k = rng.randint(1, size // 2)
        corpus.append(from_minterms(n, rng.sample(range(size), k)))
    return corpus


def all_functions(n: int) -> Iterator[BoolFn]:
    _check_n(n)
    for table in range(1 << (1 << n)):
        yield BoolFn(n, table)
