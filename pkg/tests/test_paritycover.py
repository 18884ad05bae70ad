import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import circuit_cost, dijkstra_optima, small_subset_optima
from sshr.boolfn import BoolFn, from_hex_id, random_corpus
from sshr.circuit import CNOT_AIM, T_AIM, Gate, Objective, build_block
from sshr.greedy import GreedyConfig, synth_greedy
from sshr.paritycover import (
    OPTIMAL,
    TIMEOUT,
    CoverSolution,
    _tables,
    build_instance,
    export_lp,
    lower_bound,
    packing_bound,
    read_solution_file,
    solution_from_indices,
    solve,
    synth_exact,
    verify_solution,
)
from sshr.ptope import FamilyKind, Parallelotope, enumerate_all

OBJECTIVES = [CNOT_AIM, T_AIM, Objective.weighted(1, 1)]


def oracle_weights(n, kind, objective):
    fam = enumerate_all(n, kind)
    weights = []
    for p in fam:
        cnot, t = circuit_cost(build_block(p, n))
        weights.append((objective.primary(cnot, t), objective.secondary(cnot, t)))
    return fam.rows, weights


def oracle_table(n, kind, objective):
    rows, weights = oracle_weights(n, kind, objective)
    return dijkstra_optima(rows, weights, 1 << n)


def numpy_oracle(n, kind, objective):
    """Bellman-Ford over all 2^(2^n) parity vectors, lexicographic via a big multiplier."""
    rows, weights = oracle_weights(n, kind, objective)
    mult = sum(s for _, s in weights) + 1
    size = 1 << (1 << n)
    dist = np.full(size, np.iinfo(np.int64).max // 4, dtype=np.int64)
    dist[0] = 0
    idx = np.arange(size)
    changed = True
    while changed:
        changed = False
        for row, (p, s) in zip(rows, weights):
            cand = dist[idx ^ row] + p * mult + s
            better = cand < dist
            if better.any():
                dist[better] = cand[better]
                changed = True
    return dist // mult


def worked(n=4):
    return from_hex_id("0x46B9", n)


def test_build_instance_worked_example():
    inst = build_instance(worked(), enumerate_all(4), CNOT_AIM)
    assert len(inst) == 257
    assert inst.target.bit_count() == 8 and inst.target < 1 << 16


def test_build_instance_errors():
    with pytest.raises(ValueError):
        build_instance(worked(), enumerate_all(3))
    with pytest.raises(ValueError):
        build_instance(worked(), enumerate_all(4), Objective(0, 0, 1, 1))


def test_subcube_instance_rows_are_cubes():
    inst = build_instance(from_hex_id("0xE8", 3), enumerate_all(3, FamilyKind.SUBCUBE))
    cubes = set()
    for anchor in range(8):
        for free in range(8):
            cubes.add(sum(1 << x for x in range(8) if (x ^ anchor) & ~free & 7 == 0))
    assert set(inst.rows) == cubes


def test_constant_false():
    inst = build_instance(BoolFn(4, 0), enumerate_all(4))
    sol = solve(inst, 5)
    assert sol.indices == () and sol.tc == 0 and sol.status == OPTIMAL


def test_worked_example_solution(worked_triple):
    fam = enumerate_all(4)
    inst = build_instance(worked(), fam, CNOT_AIM)
    triple = solution_from_indices(inst, [fam.index(p) for p in worked_triple])
    assert verify_solution(inst, triple)
    assert triple.tc == 23
    s1, s2, _ = worked_triple
    assert not verify_solution(inst, solution_from_indices(inst, [fam.index(s1), fam.index(s2)]))
    sol = solve(inst, 60)
    assert sol.status == OPTIMAL and sol.tc <= 23
    assert verify_solution(inst, sol)


def test_verify_solution_edge_cases():
    inst = build_instance(BoolFn(3, 0), enumerate_all(3))
    assert verify_solution(inst, CoverSolution((), 0))
    assert not verify_solution(inst, CoverSolution((), 1))
    assert not verify_solution(inst, CoverSolution((0, 0), 0))
    assert not verify_solution(inst, CoverSolution((99,), 0))


def test_solve_argument_errors():
    inst = build_instance(worked(), enumerate_all(4))
    with pytest.raises(ValueError):
        solve(inst, 0)
    with pytest.raises(ValueError):
        solve(inst, -1)
    with pytest.raises(ValueError):
        solve(inst, 5, incumbent=[0])
    with pytest.raises(ValueError):
        solve(inst, 5, incumbent=CoverSolution((0,), 0))


@pytest.mark.parametrize("objective", OBJECTIVES, ids=lambda o: o.name)
@pytest.mark.parametrize("kind", [FamilyKind.FULL, FamilyKind.SUBCUBE])
def test_n3_matches_brute_force(objective, kind):
    table = oracle_table(3, kind, objective)
    fam = enumerate_all(3, kind)
    for target in range(256):
        inst = build_instance(BoolFn(3, target), fam, objective)
        sol = solve(inst, 60)
        assert sol.status == OPTIMAL
        assert (sol.tc, sol.tie) == table[target], hex(target)


def test_n3_oracles_agree():
    rows, weights = oracle_weights(3, FamilyKind.FULL, CNOT_AIM)
    assert dijkstra_optima(rows, weights, 8) == small_subset_optima(rows, weights, 4)


def test_n3_packing_only_search():
    """With the coset tables switched off the search must still reach the optimum."""
    table = oracle_table(3, FamilyKind.FULL, CNOT_AIM)
    fam = enumerate_all(3)
    for target in range(256):
        inst = build_instance(BoolFn(3, target), fam, CNOT_AIM)
        sol = solve(inst, 60, fold_limit=0, warm_start=False)
        assert sol.status == OPTIMAL
        assert (sol.tc, sol.tie) == table[target]


@pytest.mark.parametrize("objective", [CNOT_AIM, T_AIM], ids=lambda o: o.name)
@pytest.mark.parametrize("kind", [FamilyKind.FULL, FamilyKind.SUBCUBE])
def test_n4_matches_numpy_oracle(objective, kind):
    best = numpy_oracle(4, kind, objective)
    fam = enumerate_all(4, kind)
    for f in random_corpus(4, 40, seed=11):
        sol = solve(build_instance(f, fam, objective), 60)
        assert sol.status == OPTIMAL and sol.tc == best[f.table], f.hex_id


@pytest.mark.parametrize("objective", OBJECTIVES, ids=lambda o: o.name)
def test_bounds_admissible_n3(objective):
    """Bounds at the root never exceed the true optimum of the residual.

    The bounds see positive-weight candidates only; the true optimum may also
    use zero-weight ones, so the comparison goes through every zero split.
    """
    table = oracle_table(3, FamilyKind.FULL, objective)
    inst = build_instance(BoolFn(3, 0), enumerate_all(3), objective)
    tabs = _tables(inst)
    live = (1 << len(tabs.pos_idx)) - 1
    for r in range(256):
        opt = table[r][0] * tabs.scale + table[r][1]
        assert packing_bound(tabs, r, live) <= lower_bound(tabs, r, live)
        assert min(c0 + lower_bound(tabs, r ^ z, live) for z, (c0, _) in tabs.span.items()) <= opt


def test_dominance_and_strictness_n4():
    fam_full, fam_sub = enumerate_all(4), enumerate_all(4, FamilyKind.SUBCUBE)
    strict = False
    for f in random_corpus(4, 60, seed=4) + [worked()]:
        full = solve(build_instance(f, fam_full), 60)
        sub = solve(build_instance(f, fam_sub), 60)
        assert full.tc <= sub.tc
        strict |= full.tc < sub.tc
    assert strict


def test_anytime_node_limit():
    f = random_corpus(5, 1, seed=99)[0]
    inst = build_instance(f, enumerate_all(5), CNOT_AIM)
    sol = solve(inst, 60, node_limit=5)
    assert sol.status == TIMEOUT
    assert verify_solution(inst, sol)
    tcs = [tc for _, tc, _ in sol.log]
    assert tcs == sorted(tcs, reverse=True)


def test_warm_start_dominance():
    for objective in (CNOT_AIM, T_AIM):
        for f in random_corpus(4, 30, seed=8):
            h = synth_greedy(f, GreedyConfig(objective=objective))
            i = synth_exact(f, FamilyKind.FULL, objective, 30)
            assert i.tc <= h.tc


def test_synth_exact_examples():
    r = synth_exact(BoolFn(4, 0xFFFF), FamilyKind.FULL, CNOT_AIM, 10)
    assert r.circuit.gates == (Gate.x(4),) and r.tc == 0
    table = oracle_table(3, FamilyKind.FULL, CNOT_AIM)
    r = synth_exact(from_hex_id("0xE8", 3), FamilyKind.FULL, CNOT_AIM, 10)
    assert r.tc == table[0xE8][0] and r.status == OPTIMAL


def test_seed_outside_family_rejected():
    bad = [Parallelotope(4, 0, ((0, 1),))]
    with pytest.raises(ValueError):
        synth_exact(worked(), FamilyKind.SUBCUBE, CNOT_AIM, 5, seeds=[bad])


def test_seeds_are_used(worked_triple):
    r = synth_exact(worked(), FamilyKind.FULL, CNOT_AIM, 5, seeds=[list(worked_triple)], node_limit=1)
    assert r.tc <= 23


# --- LP export ---------------------------------------------------------------

def parse_lp(text):
    """Minimal reader for the exported LP: objective, equality rows, bounds, integrality."""
    section = None
    obj: dict[str, int] = {}
    rows = []
    bounds = {}
    integer = set()
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("\\"):
            continue
        if s in ("Minimize", "Subject To", "Bounds", "General", "Binary", "End"):
            section = s
            continue
        if section == "Minimize":
            for coef, var in re.findall(r"(\d+) (\w+)", s.split(":", 1)[1]):
                obj[var] = int(coef)
        elif section == "Subject To":
            name, expr = s.split(":", 1)
            lhs, rhs = expr.split("=")
            terms = {}
            for sign, coef, var in re.findall(r"([+-]?)\s*(\d*)\s*([A-Za-z]\w*)", lhs):
                terms[var] = (-1 if sign == "-" else 1) * int(coef or 1)
            rows.append((name.strip(), terms, int(rhs)))
        elif section == "Bounds":
            lo, var, hi = re.fullmatch(r"(\d+) <= (\w+) <= (\d+)", s).groups()
            bounds[var] = (int(lo), int(hi))
        elif section in ("General", "Binary"):
            for var in s.split():
                integer.add(var)
                if section == "Binary":
                    bounds[var] = (0, 1)
    return obj, rows, bounds, integer


@pytest.mark.parametrize("helpers", [True, False])
def test_lp_structure(helpers):
    inst = build_instance(worked(), enumerate_all(4), CNOT_AIM)
    obj, rows, bounds, integer = parse_lp(export_lp(inst, helpers))
    xs = {v for v in integer if v.startswith("x")}
    assert len(xs) == 257
    parity = [r for r in rows if r[0].startswith("parity")]
    assert len(parity) == 16
    assert len(rows) == (32 if helpers else 16)
    assert sum(rhs for _, _, rhs in parity) == 8


def test_lp_constant_false_relaxation_zero():
    from scipy.optimize import linprog

    inst = build_instance(BoolFn(3, 0), enumerate_all(3), CNOT_AIM)
    c, a, b, lo, hi, _ = lp_matrices(export_lp(inst, False))
    res = linprog(c, A_eq=a, b_eq=b, bounds=list(zip(lo, hi)))
    assert res.status == 0 and abs(res.fun) < 1e-9


def lp_matrices(text):
    obj, rows, bounds, integer = parse_lp(text)
    names = sorted({v for _, t, _ in rows for v in t} | set(obj))
    col = {v: i for i, v in enumerate(names)}
    c = np.zeros(len(names))
    for v, w in obj.items():
        c[col[v]] = w
    a = np.zeros((len(rows), len(names)))
    b = np.zeros(len(rows))
    for i, (_, terms, rhs) in enumerate(rows):
        for v, coef in terms.items():
            a[i, col[v]] = coef
        b[i] = rhs
    lo = np.array([bounds.get(v, (0, np.inf))[0] for v in names], dtype=float)
    hi = np.array([bounds.get(v, (0, np.inf))[1] for v in names], dtype=float)
    integrality = np.array([1 if v in integer else 0 for v in names])
    return c, a, b, lo, hi, integrality


@pytest.mark.parametrize("helpers", [True, False])
def test_lp_milp_cross_check(helpers):
    """An external MILP solver on the exported model agrees with our optimum."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    fam = enumerate_all(3)
    for f in random_corpus(3, 12, seed=5) + [from_hex_id("0xE8", 3)]:
        inst = build_instance(f, fam, CNOT_AIM)
        c, a, b, lo, hi, integrality = lp_matrices(export_lp(inst, helpers))
        res = milp(c, constraints=LinearConstraint(a, b, b), bounds=Bounds(lo, hi), integrality=integrality)
        assert res.status == 0
        assert round(res.fun) == solve(inst, 30).tc


def test_solution_file_round_trip(tmp_path, worked_triple):
    fam = enumerate_all(4)
    inst = build_instance(worked(), fam)
    idx = [fam.index(p) for p in worked_triple]
    path = tmp_path / "sol.txt"
    path.write_text("# chosen sets\n" + " ".join(map(str, idx)) + "\n")
    sol = solution_from_indices(inst, read_solution_file(path.read_text()))
    assert verify_solution(inst, sol)
    with pytest.raises(ValueError):
        solution_from_indices(inst, [1000])


@given(st.integers(0, 255))
def test_solve_any_3_bit_verifies(target):
    inst = build_instance(BoolFn(3, target), enumerate_all(3), T_AIM)
    assert verify_solution(inst, solve(inst, 10))
