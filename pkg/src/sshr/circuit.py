"""Reversible circuit IR, parallelotope blocks, simulation and gate costs.

Qubit ``q_i`` (``i < n``) carries input bit ``x_{n-1-i}``, so ``q_0`` is the
most significant input; ``q_n`` is the oracle output.  Every gate is an
X-with-controls: no controls is a plain X, one positive control a CNOT, and
anything else a multi-controlled Toffoli (MCT).  Controls carry a polarity so
open controls survive until cost accounting or emission lowers them.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .boolfn import BoolFn
from .ptope import Parallelotope


def qubit_of(coord: int, n: int) -> int:
    return n - 1 - coord


@dataclass(frozen=True)
class Gate:
    target: int
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self) -> None:
        ctrls = tuple((int(q), bool(pol)) for q, pol in self.controls)
        qubits = [q for q, _ in ctrls]
        if len(set(qubits)) != len(qubits):
            raise ValueError("repeated control qubit")
        if self.target in qubits:
            raise ValueError("control and target coincide")
        if self.target < 0 or any(q < 0 for q in qubits):
            raise ValueError("negative qubit index")
        object.__setattr__(self, "controls", ctrls)

    @classmethod
    def x(cls, target: int) -> Gate:
        return cls(target)

    @classmethod
    def cnot(cls, control: int, target: int) -> Gate:
        return cls(target, ((control, True),))

    @classmethod
    def mct(cls, controls: Iterable[tuple[int, bool]], target: int) -> Gate:
        return cls(target, tuple(controls))

    @property
    def kind(self) -> str:
        if not self.controls:
            return "x"
        if len(self.controls) == 1 and self.controls[0][1]:
            return "cx"
        return "mcx"

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls) + (self.target,)

    def lowered(self) -> list[Gate]:
        neg = [q for q, pol in self.controls if not pol]
        if not neg:
            return [self]
        pos = Gate(self.target, tuple((q, True) for q, _ in self.controls))
        sandwich = [Gate(q) for q in neg]
        return sandwich + [pos] + sandwich


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    # gate offsets where a new parallelotope block begins
    blocks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"gate {g} exceeds circuit width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise ValueError("cannot concatenate circuits of different width")
        offset = len(self.gates)
        return Circuit(
            self.width,
            self.gates + other.gates,
            self.blocks + tuple(b + offset for b in other.blocks),
        )

    def lowered(self) -> Circuit:
        gates: list[Gate] = []
        starts = set(self.blocks)
        blocks = []
        for i, g in enumerate(self.gates):
            if i in starts:
                blocks.append(len(gates))
            gates.extend(g.lowered())
        return Circuit(self.width, tuple(gates), tuple(blocks))


def concat(width: int, parts: Iterable[Circuit]) -> Circuit:
    out = Circuit(width)
    for c in parts:
        out = out + c
    return out


def build_block(p: Parallelotope, n: int) -> Circuit:
    """Circuit flipping ``q_n`` exactly on the vertices of ``p``.

    Each block keeps its lowest qubit as representative and XORs it into the
    other block qubits, so those wires become constant on the parallelotope;
    a single (n - dim)-control gate then tests the constants.
    """
    if p.n != n:
        raise ValueError(f"parallelotope lives in dimension {p.n}, circuit expects {n}")
    a = p.anchor
    spread: list[Gate] = []
    controls: list[tuple[int, bool]] = []
    covered = 0
    for block in p.blocks:
        rep = max(block)
        for c in block:
            covered |= 1 << c
            if c == rep:
                continue
            spread.append(Gate.cnot(qubit_of(rep, n), qubit_of(c, n)))
            controls.append((qubit_of(c, n), bool(((a >> c) ^ (a >> rep)) & 1)))
    for c in range(n):
        if not (covered >> c) & 1:
            controls.append((qubit_of(c, n), bool((a >> c) & 1)))
    controls.sort()
    gates = spread + [Gate.mct(controls, n)] + spread[::-1]
    return Circuit(n + 1, tuple(gates), (0,))


def _wire_values(x: int, y: int, n: int) -> list[int]:
    return [(x >> (n - 1 - q)) & 1 for q in range(n)] + [y & 1]


def simulate(c: Circuit, x: int, y: int) -> tuple[int, int]:
    n = c.width - 1
    if not 0 <= x < (1 << n):
        raise ValueError(f"input {x} out of range for {n} inputs")
    w = _wire_values(x, y, n)
    for g in c.gates:
        if all(w[q] == pol for q, pol in g.controls):
            w[g.target] ^= 1
    out = 0
    for q in range(n):
        out |= w[q] << (n - 1 - q)
    return out, w[n]


@lru_cache(maxsize=None)
def _initial_wires(n: int) -> tuple[int, ...]:
    lanes = 1 << (n + 1)
    wires = []
    for q in range(n):
        bit = n - 1 - q
        wires.append(sum(1 << lane for lane in range(lanes) if (lane >> bit) & 1))
    wires.append(((1 << lanes) - 1) ^ ((1 << (1 << n)) - 1))
    return tuple(wires)


def simulate_all(c: Circuit) -> list[int]:
    """Run all ``2^(n+1)`` basis states at once, one lane per state.

    Lane ``(y << n) | x`` holds input ``x`` and output ``y``; the result gives
    each wire's final value across lanes as a bitmask.
    """
    all_lanes = (1 << (1 << c.width)) - 1
    wires = list(_initial_wires(c.width - 1))
    for g in c.gates:
        cond = all_lanes
        for q, pol in g.controls:
            cond &= wires[q] if pol else ~wires[q]
        wires[g.target] ^= cond & all_lanes
    return wires


def verify_oracle(c: Circuit, f: BoolFn) -> bool:
    """True iff ``c`` maps every ``|x>|y>`` to ``|x>|y ^ f(x)>``."""
    if c.width != f.n + 1:
        return False
    n = f.n
    start = _initial_wires(n)
    final = simulate_all(c)
    if tuple(final[:n]) != start[:n]:
        return False
    flip = f.table | (f.table << (1 << n))
    return final[n] == start[n] ^ flip


class MctCost(NamedTuple):
    t: int
    h: int
    cnot: int
    ancilla: int


def mct_cost(k: int) -> MctCost:
    """Clifford+T cost of a k-control Toffoli; k = 0, 1 are the native X and CNOT."""
    if k < 0:
        raise ValueError("negative control count")
    if k == 0:
        return MctCost(0, 0, 0, 0)
    if k == 1:
        return MctCost(0, 0, 1, 0)
    if k == 2:
        return MctCost(7, 2, 6, 0)
    if k == 3:
        return MctCost(16, 6, 14, 1)
    return MctCost(8 * k - 8, 8 * k - 12, 4 * k - 6, -(-(k - 2) // 2))


@dataclass
class GateStats:
    x_count: int = 0
    cnot_count: int = 0
    mct_histogram: dict[int, int] = field(default_factory=dict)
    t_count: int = 0
    h_count: int = 0
    cnot_total: int = 0
    ancilla_max: int = 0
    ancilla_sum: int = 0

    def __add__(self, other: GateStats) -> GateStats:
        hist = Counter(self.mct_histogram)
        hist.update(other.mct_histogram)
        return GateStats(
            self.x_count + other.x_count,
            self.cnot_count + other.cnot_count,
            dict(sorted(hist.items())),
            self.t_count + other.t_count,
            self.h_count + other.h_count,
            self.cnot_total + other.cnot_total,
            max(self.ancilla_max, other.ancilla_max),
            self.ancilla_sum + other.ancilla_sum,
        )

    def as_dict(self) -> dict:
        return {
            "x": self.x_count,
            "cnot": self.cnot_count,
            "mct": {str(k): v for k, v in sorted(self.mct_histogram.items())},
            "t": self.t_count,
            "h": self.h_count,
            "cnot_total": self.cnot_total,
            "ancilla_max": self.ancilla_max,
            "ancilla_sum": self.ancilla_sum,
        }


def stats(c: Circuit) -> GateStats:
    s = GateStats()
    hist: Counter[int] = Counter()
    for g in c.lowered().gates:
        k = len(g.controls)
        if k == 0:
            s.x_count += 1
        elif k == 1:
            s.cnot_count += 1
        else:
            hist[k] += 1
    s.mct_histogram = dict(sorted(hist.items()))
    s.cnot_total = s.cnot_count
    for k, count in hist.items():
        cost = mct_cost(k)
        s.t_count += count * cost.t
        s.h_count += count * cost.h
        s.cnot_total += count * cost.cnot
        s.ancilla_sum += count * cost.ancilla
        s.ancilla_max = max(s.ancilla_max, cost.ancilla)
    return s


@dataclass(frozen=True)
class Objective:
    """Linear objective ``alpha * CNOT + beta * T`` with a lexicographic tie-break."""

    alpha: int = 1
    beta: int = 0
    tie_alpha: int = 0
    tie_beta: int = 1
    name: str = "cnot"

    def __post_init__(self) -> None:
        if min(self.alpha, self.beta, self.tie_alpha, self.tie_beta) < 0:
            raise ValueError("objective weights must be nonnegative")

    def primary(self, cnot: int, t: int) -> int:
        return self.alpha * cnot + self.beta * t

    def secondary(self, cnot: int, t: int) -> int:
        return self.tie_alpha * cnot + self.tie_beta * t

    @classmethod
    def weighted(cls, alpha: int, beta: int) -> Objective:
        return cls(alpha, beta, 0, 0, f"weighted({alpha},{beta})")


CNOT_AIM = Objective(1, 0, 0, 1, "cnot")
T_AIM = Objective(0, 1, 1, 0, "tcount")


def block_weights(p: Parallelotope) -> tuple[int, int]:
    """(CNOT total, T total) of ``build_block(p)`` without building it."""
    cost = mct_cost(p.n - p.dim)
    spread = 2 * sum(k - 1 for k in p.block_sizes)
    return spread + cost.cnot, cost.t


def block_cost(p: Parallelotope, n: int, objective: Objective = CNOT_AIM) -> int:
    if p.n != n:
        raise ValueError("dimension mismatch")
    return objective.primary(*block_weights(p))


_QREG = re.compile(r"^qreg\s+q\[(\d+)\];?$")
_Q = re.compile(r"q\[(\d+)\]")


def emit(c: Circuit, fmt: str = "qasm", stats_: GateStats | None = None) -> str:
    if fmt == "qasm":
        lines = [f"qreg q[{c.width}];"]
        for g in c.lowered().gates:
            if g.kind == "x":
                lines.append(f"x q[{g.target}]")
            elif g.kind == "cx":
                lines.append(f"cx q[{g.controls[0][0]}],q[{g.target}]")
            else:
                ctrl = ",".join(f"q[{q}]" for q, _ in g.controls)
                lines.append(f"mcx {ctrl} -> q[{g.target}]")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "width": c.width,
            "gates": [
                {
                    "op": g.kind,
                    "controls": [[q, int(pol)] for q, pol in g.controls],
                    "target": g.target,
                }
                for g in c.gates
            ],
            "blocks": list(c.blocks),
            "stats": (stats_ or stats(c)).as_dict(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unsupported output format {fmt!r}")


def parse_qasm(text: str, width: int | None = None) -> Circuit:
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip().rstrip(";").strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = _QREG.match(line + ";")
        if m:
            declared = int(m.group(1))
            if width is not None and width != declared:
                raise ValueError(f"netlist declares {declared} qubits, expected {width}")
            width = declared
            continue
        op, _, rest = line.partition(" ")
        qs = [int(v) for v in _Q.findall(rest)]
        try:
            if op == "x" and len(qs) == 1:
                gates.append(Gate.x(qs[0]))
            elif op == "cx" and len(qs) == 2:
                gates.append(Gate.cnot(qs[0], qs[1]))
            elif op == "mcx" and "->" in rest and len(qs) >= 2:
                head, _, tail = rest.partition("->")
                ctrl = [int(v) for v in _Q.findall(head)]
                (target,) = [int(v) for v in _Q.findall(tail)]
                gates.append(Gate.mct([(q, True) for q in ctrl], target))
            else:
                raise ValueError(op)
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if width is None:
        raise ValueError("netlist has no qreg declaration and no width was given")
    return Circuit(width, tuple(gates))


def parse_json(text: str) -> Circuit:
    doc = json.loads(text)
    gates = [
        Gate(g["target"], tuple((q, bool(pol)) for q, pol in g.get("controls", [])))
        for g in doc["gates"]
    ]
    return Circuit(doc["width"], tuple(gates), tuple(doc.get("blocks", ())))


def parse_netlist(text: str, width: int | None = None) -> Circuit:
    if text.lstrip().startswith("{"):
        c = parse_json(text)
        if width is not None and c.width != width:
            raise ValueError(f"netlist width {c.width}, expected {width}")
        return c
    return parse_qasm(text, width)


def blocks_of(c: Circuit) -> list[Circuit]:
    bounds = list(c.blocks) + [len(c.gates)]
    return [
        Circuit(c.width, c.gates[lo:hi], (0,))
        for lo, hi in zip(bounds, bounds[1:])
    ]


def build_blocks(ptopes: Sequence[Parallelotope], n: int) -> Circuit:
    return concat(n + 1, (build_block(p, n) for p in ptopes))
