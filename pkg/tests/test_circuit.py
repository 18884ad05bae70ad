import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import simulate_point
from sshr.boolfn import BoolFn, from_hex_id
from sshr.circuit import (
    CNOT_AIM,
    T_AIM,
    Circuit,
    Gate,
    GateStats,
    MctCost,
    Objective,
    block_cost,
    block_weights,
    blocks_of,
    build_block,
    build_blocks,
    emit,
    mct_cost,
    parse_json,
    parse_netlist,
    parse_qasm,
    simulate,
    simulate_all,
    stats,
    verify_oracle,
)
from sshr.ptope import FamilyKind, Parallelotope, enumerate_all
from test_ptope import parallelotopes


@st.composite
def circuits(draw, max_n=5, max_gates=12):
    n = draw(st.integers(1, max_n))
    gates = []
    for _ in range(draw(st.integers(0, max_gates))):
        target = draw(st.integers(0, n))
        others = [q for q in range(n + 1) if q != target]
        ctrl = draw(st.lists(st.sampled_from(others), unique=True, max_size=len(others)))
        pols = draw(st.lists(st.booleans(), min_size=len(ctrl), max_size=len(ctrl)))
        gates.append(Gate(target, tuple(zip(ctrl, pols))))
    return Circuit(n + 1, tuple(gates))


def worked_circuit(worked_triple):
    s1, s2, s3 = worked_triple
    return build_blocks([s3, s1, s2], 4)


def test_worked_circuit_first_block(worked_triple):
    c = build_block(worked_triple[2], 4)
    assert c.gates == (
        Gate.cnot(2, 3),
        Gate.mct([(1, False), (3, True)], 4),
        Gate.cnot(2, 3),
    )


def test_worked_circuit_middle_block(worked_triple):
    c = build_block(worked_triple[0], 4)
    assert c.gates == (Gate.mct([(0, False)], 4),)


def test_full_cube_is_single_x():
    c = build_block(Parallelotope(4, 0, ((0,), (1,), (2,), (3,))), 4)
    assert c.gates == (Gate.x(4),)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        build_block(Parallelotope(3, 0), 4)


def test_worked_circuit_semantics(worked_triple):
    c = worked_circuit(worked_triple)
    f = from_hex_id("0x46B9", 4)
    assert verify_oracle(c, f)
    assert simulate(c, 0b0001, 0) == (0b0001, 0)
    assert simulate(c, 0b1110, 1) == (0b1110, 0)


def test_worked_circuit_stats(worked_triple):
    s = stats(worked_circuit(worked_triple))
    assert s.cnot_total == 2 + 6 + 1 + 14 == 23
    assert s.mct_histogram == {2: 1, 3: 1}
    assert s.cnot_count == 3
    # one open control in the first block, one in the middle, two in the last
    assert s.x_count == 2 * 3
    assert s.t_count == 7 + 16


def test_verify_oracle_examples():
    empty3 = Circuit(4)
    assert verify_oracle(empty3, from_hex_id("0x0", 3))
    assert not verify_oracle(empty3, from_hex_id("0xE8", 3))
    assert not verify_oracle(Circuit(5), from_hex_id("0x0", 3))  # width mismatch


def test_simulate_identity():
    for x in range(8):
        for y in (0, 1):
            assert simulate(Circuit(4), x, y) == (x, y)
    with pytest.raises(ValueError):
        simulate(Circuit(4), 8, 0)


@given(circuits())
def test_simulators_agree(c):
    n = c.width - 1
    wires = simulate_all(c)
    for y in (0, 1):
        for x in range(1 << n):
            lane = (y << n) | x
            got = sum(((wires[q] >> lane) & 1) << (n - 1 - q) for q in range(n))
            assert (got, (wires[n] >> lane) & 1) == simulate_point(c, x, y) == simulate(c, x, y)


@given(parallelotopes(max_n=6))
def test_block_semantics_and_self_inverse(p):
    c = build_block(p, p.n)
    f = BoolFn(p.n, p.row)
    assert verify_oracle(c, f)
    assert verify_oracle(c + c, BoolFn(p.n, 0))


@given(st.lists(parallelotopes(max_n=4).filter(lambda p: p.n == 4), min_size=1, max_size=5), st.randoms())
def test_block_order_irrelevant(ps, rnd):
    table = 0
    for p in ps:
        table ^= p.row
    f = BoolFn(4, table)
    shuffled = list(ps)
    rnd.shuffle(shuffled)
    assert verify_oracle(build_blocks(ps, 4), f)
    assert verify_oracle(build_blocks(shuffled, 4), f)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(2, ((2, True),))
    with pytest.raises(ValueError):
        Gate(2, ((0, True), (0, False)))
    with pytest.raises(ValueError):
        Circuit(2, (Gate.cnot(0, 2),))


@pytest.mark.parametrize(
    "k,expected",
    [(2, (7, 2, 6, 0)), (3, (16, 6, 14, 1)), (4, (24, 20, 10, 1)), (5, (32, 28, 14, 2)), (8, (56, 52, 26, 3))],
)
def test_mct_cost_table(k, expected):
    assert tuple(mct_cost(k)) == expected


def test_native_gate_costs():
    assert mct_cost(0) == MctCost(0, 0, 0, 0)
    assert mct_cost(1) == MctCost(0, 0, 1, 0)


def test_single_mct_stats():
    s = stats(Circuit(6, (Gate.mct([(0, True), (1, True), (2, True)], 5),)))
    assert (s.t_count, s.h_count, s.cnot_total, s.ancilla_max) == (16, 6, 14, 1)
    s = stats(Circuit(6, (Gate.mct([(q, True) for q in range(5)], 5),)))
    assert (s.t_count, s.h_count, s.cnot_total, s.ancilla_max) == (32, 28, 14, 2)


def test_negative_controls_lowered():
    g = Gate.mct([(0, False), (1, True)], 2)
    low = g.lowered()
    assert [x.kind for x in low] == ["x", "mcx", "x"]
    assert stats(Circuit(3, (g,))).x_count == 2


@given(circuits(), circuits())
def test_stats_additive(a, b):
    if a.width != b.width:
        b = Circuit(a.width)
    total = stats(a) + stats(b)
    joined = stats(a + b)
    assert joined == total
    assert joined.ancilla_max == max(stats(a).ancilla_max, stats(b).ancilla_max)


def test_block_cost_examples(worked_triple):
    s1, s2, s3 = worked_triple
    assert block_weights(s2) == (14, 16)
    assert block_weights(s3) == (8, 7)
    full = Parallelotope(4, 0, ((0,), (1,), (2,), (3,)))
    assert block_weights(full) == (0, 0)
    assert block_cost(s2, 4, CNOT_AIM) == 14
    assert block_cost(s2, 4, T_AIM) == 16
    assert block_cost(s2, 4, Objective.weighted(2, 3)) == 2 * 14 + 3 * 16


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_block_weights_match_built_circuits(n):
    for p in enumerate_all(n, FamilyKind.FULL):
        s = stats(build_block(p, n))
        assert block_weights(p) == (s.cnot_total, s.t_count)


def test_emit_lines():
    c = Circuit(4, (Gate.x(0), Gate.cnot(2, 3), Gate.mct([(0, True), (1, False)], 3)))
    text = emit(c)
    assert text.splitlines() == [
        "qreg q[4];",
        "x q[0]",
        "cx q[2],q[3]",
        "x q[1]",
        "mcx q[0],q[1] -> q[3]",
        "x q[1]",
    ]
    with pytest.raises(ValueError):
        emit(c, "svg")


@given(circuits())
def test_qasm_round_trip(c):
    assert parse_qasm(emit(c)).gates == c.lowered().gates
    assert parse_netlist(emit(c)).width == c.width


@given(circuits())
def test_json_round_trip(c):
    doc = emit(c, "json")
    back = parse_json(doc)
    assert back.gates == c.gates
    assert parse_netlist(doc).gates == c.gates


def test_qasm_parse_errors():
    with pytest.raises(ValueError):
        parse_qasm("x q[0]\n")
    with pytest.raises(ValueError):
        parse_qasm("qreg q[2];\nfoo q[0]\n")
    with pytest.raises(ValueError):
        parse_qasm("qreg q[3];\n", width=4)


def test_blocks_of(worked_triple):
    c = worked_circuit(worked_triple)
    parts = blocks_of(c)
    assert len(parts) == 3
    assert sum(len(p) for p in parts) == len(c)


def test_random_parallelotopes_n5():
    rng = random.Random(5)
    fam = enumerate_all(5)
    for _ in range(200):
        p = fam[rng.randrange(len(fam))]
        assert verify_oracle(build_block(p, 5), BoolFn(5, p.row))
    assert isinstance(GateStats().as_dict(), dict)
