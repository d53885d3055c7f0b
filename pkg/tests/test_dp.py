from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coct import dp, lattice
from coct.dp import Table, sample_weights, solve, table_introduce, table_join, table_relabel, table_union
from coct.expression import parse
from coct.patterns import BLACK, NOC, WHITE, Pattern, parrep, action, patadd

P = Pattern.of
rho = lattice.rho


def test_weights_scale_with_wnodes():
    e = parse("(e 1 2 (u (v 1 1) (v 2 2)))")
    w = sample_weights(e, seed=3, trial=0)
    assert w.W == 24
    vals = w.values[e.wnodes()]
    assert vals.min() >= 1 and vals.max() <= 24
    assert np.array_equal(sample_weights(e, 3, 0).values, w.values)
    assert not np.array_equal(sample_weights(e, 3, 1).values, w.values)
    assert w.wmax() == 3 * 24


def test_weights_accept_any_64bit_seed():
    e = parse("(v 1 1)")
    a = sample_weights(e, -1, 0)
    b = sample_weights(e, 2 ** 64 - 1, 0)
    assert np.array_equal(a.values, b.values)


def test_relabel_node_only_has_zero_weights():
    e = parse("(r 1 2 (v 1 1))")
    w = sample_weights(e, 0, 0)
    assert not w.values[0].any() and w.values[1].all()


def test_introduce_non_root_vertex():
    tab = table_introduce(2, 1, False, [3, 5, 7, 9], budget=2)
    noc = (NOC, NOC)
    assert tab.entries() == {
        (1, 3, rho(P([0], [1]), noc)),
        (1, 5, rho(P([0], [1]), noc)),
        (0, 7, rho(P([0]), (BLACK, NOC))),
        (0, 9, rho(P([0]), (WHITE, NOC))),
    }


def test_introduce_colliding_weights_cancel():
    tab = table_introduce(1, 1, False, [4, 4, 2, 6], budget=1)
    assert {b for b, _, _ in tab.entries()} == {0}


def test_introduce_root_vertex():
    tab = table_introduce(1, 1, True, [1, 2, 3, 4], budget=1)
    got = {(b, w): lattice.rho_inv(s, 1) for b, w, s in tab.entries()}
    assert got[(1, 1)] == (P([0]), (NOC,))
    # fix on [01] adds the singleton, which is not a CS-pattern itself; its table
    # state is the CS-pattern with label 1 in both the zero-set and as a singleton
    assert got[(1, 2)] == (P([0, 1], [1]), (NOC,))
    assert len(got) == 4


def test_introduce_zero_budget_keeps_only_colored_entries():
    tab = table_introduce(1, 1, False, [1, 2, 3, 4], budget=0)
    assert {b for b, _, _ in tab.entries()} == {0}
    assert len(tab.entries()) == 2


def test_relabel_example():
    s = rho(P([0], [1]), (BLACK, NOC))
    child = Table.from_entries([(0, 4, s)], 2)
    out = table_relabel(child, 2, 1, 2)
    assert out.entries() == {(0, 4, rho(P([0], [2]), (NOC, BLACK)))}
    empty = Table.from_entries([], 2, nb=1)
    assert table_relabel(empty, 2, 1, 2).is_empty()


def test_join_on_absent_labels_copies_to_four_weights():
    s = rho(P([0], [1]), (NOC, NOC))  # label 2 absent
    child = Table.from_entries([(1, 0, s)], 2)
    out = table_join(child, 2, 1, 2, [10, 20, 30, 40])
    assert out.entries() == {(1, w, s) for w in (10, 20, 30, 40)}


def test_join_merges_singletons():
    noc = (NOC, NOC)
    s = rho(P([0], [1], [2]), noc)
    child = Table.from_entries([(2, 0, s)], 2)
    out = table_join(child, 2, 1, 2, [1, 2, 3, 4])
    pp = patadd(P([0], [1], [2]), 1, 2)
    assert pp == P([0], [1, 2])
    want = Counter()
    for ell, w in zip(range(1, 4), (1, 2, 3)):
        for q in parrep(action(pp, ell)):
            want[(2, w, rho(q, noc))] += 1
    assert len(parrep(action(pp, 1))) == 3
    # forgetting both labels of the merged component is undefined, so weight 4 stays empty
    assert action(pp, 4) is None
    assert out.entries() == {key for key, n in want.items() if n % 2}
    assert all(w != 4 for _, w, _ in out.entries())


def test_join_drops_color_conflicts():
    s = rho(P([0]), (BLACK, BLACK))
    child = Table.from_entries([(0, 0, s)], 2)
    assert table_join(child, 2, 1, 2, [1, 2, 3, 4]).is_empty()
    s = rho(P([0]), (BLACK, WHITE))
    child = Table.from_entries([(0, 0, s)], 2)
    assert len(table_join(child, 2, 1, 2, [1, 2, 3, 4]).entries()) == 4


def naive_union(A, B, k, budget):
    acc = Counter()
    for b1, w1, s1 in A.entries():
        for b2, w2, s2 in B.entries():
            if b1 + b2 <= budget:
                acc[(b1 + b2, w1 + w2, int(lattice.join_states(s1, s2, k)))] += 1
    return {key for key, n in acc.items() if n % 2}


def random_table(rng, k, nb, density, wspan):
    S = 12 ** k
    entries = [(int(rng.integers(nb)), int(rng.integers(wspan)), int(rng.integers(S)))
               for _ in range(int(density * S))]
    return Table.from_entries(entries, k, nb=nb)


@pytest.mark.parametrize("method", ["auto", "pairs", "sparse", "rowfft", "shift", "fft"])
@pytest.mark.parametrize("k", [1, 2])
def test_union_kernels_agree_with_naive(method, k):
    rng = np.random.default_rng(k * 31)
    for budget in (0, 1, 3):
        A = random_table(rng, k, 2, 0.4, 150)
        B = random_table(rng, k, 3, 0.3, 70)
        got = table_union(A, B, k, budget, method=method)
        assert got.entries() == naive_union(A, B, k, budget)


def test_union_of_empty_is_empty():
    A = Table.from_entries([], 1, nb=1)
    B = Table.from_entries([(0, 1, 0)], 1)
    assert table_union(A, B, 1, 2).is_empty()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_join_maps_match_reference(k):
    from coct.selftest import check_join_maps
    assert check_join_maps(k) == []


def test_solve_examples(c5, triangle, c5_triangle):
    bip = parse("(e 1 2 (u (v 1 1) (v 2 2)))")
    r = solve(bip, 0)
    assert r.answer and r.reason == "bipartite"
    assert solve(c5, 1, trials=20, seed=1).answer
    assert not solve(c5, 0).answer
    assert solve(triangle, 1, trials=20, seed=2).answer
    for b in range(0, 9):
        assert not solve(c5_triangle, b, trials=3, seed=b).answer


def test_solve_rejects_bad_arguments(c5):
    with pytest.raises(ValueError):
        solve(c5, -1)
    with pytest.raises(ValueError):
        solve(c5, 1, trials=0)


def test_solve_threads_agree(c5):
    assert solve(c5, 1, trials=4, seed=9, threads=3).answer


def test_single_vertex_root_table():
    e = parse("(v 1 1)")
    w = sample_weights(e, 0, 0)
    assert dp.run_fixed_root(e, 1, 1, w) == {1}


def test_witness_profile_matches_solve(c5):
    prof = dp.witness_profile(c5, 3, trials=2, seed=4)
    hits = [b for b in prof.values() if b is not None]
    assert min(hits) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_no_false_positives_on_random_small_graphs(seed):
    from coct.expression import evaluate
    from coct.oracle import brute_force_solve
    from coct.random_instances import random_instance

    e = random_instance(seed, n_range=(2, 7), k_range=(1, 3))
    g = evaluate(e)
    for b in range(0, g.n + 1):
        if solve(e, b, trials=1, seed=seed).answer:
            assert brute_force_solve(g, b) is not None


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_no_false_positives_on_disjoint_unions(seed):
    from coct.random_instances import disjoint_union, random_corpus

    a, b = random_corpus(2, seed=seed, n_range=(3, 5), k_range=(2, 3), bipartite_share=0.0)
    e = disjoint_union(a, b)
    # a NO at the full budget covers every smaller one
    assert not solve(e, e.n_vertices, trials=1, seed=seed).answer


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_root_chain_filter_keeps_root_check(seed):
    from coct.random_instances import disjoint_union, random_instance

    e = disjoint_union(random_instance(seed, n_range=(1, 3)), random_instance(seed + 1, n_range=(1, 4)))
    runner = dp.Runner(e, e.n_vertices, sample_weights(e, seed, 0))
    empty = lattice.empty_pattern_states(e.width())
    for v0 in range(1, e.n_vertices + 1):
        full = runner.table(0, v0)
        cut = runner.table(0, v0, empty_only=True)
        assert {x for x in full.entries() if x[2] in empty} == cut.entries()
        assert runner.witnessed(v0) == dp.witnessed_budgets(full, e.width())
