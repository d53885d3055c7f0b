from itertools import combinations, product

import pytest

from coct.expression import INTRO, JOIN, RELABEL, evaluate, parse
from coct.graph import BLACK, WHITE, LabeledGraph, is_connected
from coct.oracle import (
    OracleTooLarge,
    all_connected_octs,
    brute_force_solve,
    enumerate_naive,
    enumerate_sequences,
    generate_pair,
    generate_solution_pair,
    is_proper,
    solcol,
    solpat,
)
from coct.patterns import (
    EMPTY,
    NOC,
    Pattern,
    action,
    all_patterns,
    coloring_join,
    coloring_relabel,
    color_consistent,
    consistent,
    fix,
    forget,
    patadd,
    pattern_relabel,
    pattern_union,
)
from coct.random_instances import disjoint_union, random_instance

P = Pattern.of
TRI_K2 = "(e 1 2 (u (r 2 1 (e 1 2 (u (v {0} 1) (v {1} 2)))) (v {2} 2)))"


def small_instances():
    out = [parse(TRI_K2.format(1, 2, 3))]
    out.append(disjoint_union(parse(TRI_K2.format(1, 2, 3)), parse("(e 1 2 (u (v 1 1) (v 2 2)))")))
    out.append(parse("(u %s (v 4 1))" % "(e 2 3 (e 1 3 (e 1 2 (u (u (v 1 1) (v 2 2)) (v 3 3)))))"))
    seed = 0
    while len(out) < 14:
        e = random_instance(seed, n_range=(2, 6), k_range=(1, 3), p_join=0.7)
        seed += 1
        if len(e.wnodes()) <= 9 and e.n_vertices >= 2:
            out.append(e)
    return out


INSTANCES = small_instances()


def test_brute_force_examples(c5_graph):
    assert len(brute_force_solve(c5_graph, 1)) == 1
    assert brute_force_solve(c5_graph, 0) is None
    assert brute_force_solve(LabeledGraph(3, [(1, 2), (2, 3)]), 0) == frozenset()


def test_brute_force_disconnected_odd_cycles(c5_triangle):
    g = evaluate(c5_triangle)
    assert brute_force_solve(g, g.n) is None


def test_brute_force_size_limit():
    with pytest.raises(OracleTooLarge):
        brute_force_solve(LabeledGraph(25), 1)


def test_generate_pair_single_introduce():
    e = parse("(v 1 1)")
    assert generate_pair(e, 1, {0: 2}) == (P([0, 1], [1]), (NOC,), True)
    assert generate_pair(e, 1, {0: 1}) == (P([0]), (NOC,), True)
    assert generate_pair(e, 1, {0: 3}) == (EMPTY, (1,), True)
    assert generate_pair(e, 2, {0: 1}) == (P([0], [1]), (NOC,), True)


def test_generate_pair_undefined_action():
    # vertices 2 and 3 form the component {1,2}; action 4 forgets both of its labels
    e = parse("(e 1 2 (u (u (v 1 1) (v 2 2)) (v 3 1)))")
    assert generate_pair(e, 1, {0: 4, 3: 1, 4: 1, 5: 1}) is None
    assert generate_pair(e, 1, {0: 1, 3: 1, 4: 1, 5: 1}) is not None


def test_generate_pair_reports_invalid_colorings():
    e = parse("(e 1 2 (u (v 1 1) (v 2 2)))")
    p, c, ok = generate_pair(e, 1, {0: 1, 2: 3, 3: 3})
    assert not ok and c == (1, 1)


def test_single_introduce_has_four_sequences():
    e = parse("(v 1 1)")
    cnt = enumerate_sequences(e, 1)
    assert sum(cnt.values()) == 4


def test_enumeration_strategies_agree():
    for e in INSTANCES[:6]:
        wf = {x: (x + 1, 2 * x + 3, 5, 7) for x in e.wnodes()}
        for v0 in (1, e.n_vertices):
            assert enumerate_sequences(e, v0, wf) == enumerate_naive(e, v0, wf)


def test_enumeration_cap():
    e = parse("(e 1 2 " * 11 + "(u (v 1 1) (v 2 2))" + ")" * 11)
    with pytest.raises(OracleTooLarge):
        enumerate_sequences(e, 1)


def _witnesses(g, S):
    rest = [v for v in g.vertices if v not in S]
    for colors in product((BLACK, WHITE), repeat=len(rest)):
        yield dict(zip(rest, colors))


def _pi_family(e, S, witness, v0, k):
    """Every (pattern, coloring, valid) generated by some action-sequence that
    agrees with the solution-sequence of (S, witness) on introduce nodes."""
    kind, a, b = e.kind.tolist(), e.a.tolist(), e.b.tolist()
    right = e.right.tolist()
    val = {}
    for x in range(len(e) - 1, -1, -1):
        kd = kind[x]
        if kd == INTRO:
            v, i = a[x], b[x]
            if v in S:
                p = P([0, i]) if v == v0 else P([0], [i])
                val[x] = {(forget(p, i), (NOC,) * k, True), (fix(p, i), (NOC,) * k, True)}
            else:
                c = [NOC] * k
                c[i - 1] = 1 if witness[v] == BLACK else 2
                val[x] = {(EMPTY, tuple(c), True)}
        elif kd == RELABEL:
            i, j = a[x], b[x]
            val[x] = {(pattern_relabel(p, i, j), coloring_relabel(c, i, j), ok) if i != j else (p, c, ok)
                      for p, c, ok in val.pop(x + 1)}
        elif kd == JOIN:
            i, j = a[x], b[x]
            out = set()
            for p, c, ok in val.pop(x + 1):
                ok2 = ok and color_consistent(c[i - 1], c[j - 1])
                for ell in range(1, 5):
                    r = action(patadd(p, i, j), ell)
                    if r is not None:
                        out.add((r, c, ok2))
            val[x] = out
        else:
            left, other = val.pop(x + 1), val.pop(right[x])
            val[x] = {(pattern_union(p1, p2), coloring_join(c1, c2), o1 and o2)
                      for p1, c1, o1 in left for p2, c2, o2 in other}
    return val[0]


@pytest.mark.parametrize("idx", range(len(INSTANCES)))
def test_solution_sequences_match_direct_computation(idx):
    e = INSTANCES[idx]
    g = evaluate(e)
    k = e.width()
    for size in range(g.n + 1):
        for S in combinations(g.vertices, size):
            for witness in list(_witnesses(g, S))[:4]:
                for v0 in (S[0],) if S else (1,):
                    p, c, ok, cost = generate_solution_pair(e, S, witness, v0)
                    assert cost == len(S)
                    assert p == solpat(g, set(S), v0)
                    assert c == solcol(g, set(S), witness, k)
                    assert ok == is_proper(g, set(S), witness)


@pytest.mark.slow
@pytest.mark.parametrize("idx", range(len(INSTANCES)))
def test_action_sequences_represent_solutions(idx):
    e = INSTANCES[idx]
    g = evaluate(e)
    k = e.width()
    qs = all_patterns(k)
    for size in range(1, g.n + 1):
        for S in combinations(g.vertices, size):
            v0 = S[0]
            for witness in list(_witnesses(g, S))[:2]:
                fam = _pi_family(e, set(S), witness, v0, k)
                want_c = solcol(g, set(S), witness, k)
                want_ok = is_proper(g, set(S), witness)
                assert fam and all(c == want_c and ok == want_ok for _, c, ok in fam)
                pats = {p for p, _, _ in fam}
                target = solpat(g, set(S), v0)
                for q in qs:
                    assert consistent(target, q) == any(consistent(p, q) for p in pats)


@pytest.mark.parametrize("idx", range(len(INSTANCES)))
def test_connectivity_criterion(idx):
    g = evaluate(INSTANCES[idx])
    for size in range(1, g.n + 1):
        for S in combinations(g.vertices, size):
            for v0 in g.vertices:
                got = consistent(solpat(g, set(S), v0), EMPTY)
                assert got == (is_connected(g, S) and v0 in S)


@pytest.mark.parametrize("idx", range(len(INSTANCES)))
def test_sequences_witness_exactly_the_connected_octs(idx):
    e = INSTANCES[idx]
    g = evaluate(e)
    for v0 in g.vertices:
        cnt = enumerate_sequences(e, v0)
        seq_budgets = {b for (b, _, p, _), n in cnt.items() if n and p == EMPTY}
        for b in range(1, g.n + 1):
            assert (b in seq_budgets) == bool(all_connected_octs(g, b, containing=v0))
