"""Exhaustive invariant suites shared by ``coct selftest`` and the test-suite.

Each ``check_*`` function returns a list of counterexamples (empty on success).
"""

from collections import Counter, defaultdict
from itertools import product

import numpy as np

from . import dp, lattice
from .oracle import enumerate_sequences
from .patterns import (
    all_patterns,
    bits,
    action,
    coloring_join,
    coloring_leq,
    complete_patterns,
    consistent,
    cs_patterns,
    parrep,
    patadd,
    pattern_union,
)


def check_parrep_parity(k):
    """parrep(p) parity-represents p over complete patterns."""
    bad = []
    comp = complete_patterns(k)
    for p in comp:
        fam = parrep(p)
        for q in comp:
            got = sum(1 for r in fam if consistent(r, q)) % 2
            if got != int(consistent(p, q)):
                bad.append((p, q))
    return bad


def representatives(p):
    """The family R_p: {p} for complete p, else the defined actions."""
    if p.is_complete():
        return [p]
    n = 2 if len(bits(p.inc)) == 1 else 4
    reps = (action(p, ell) for ell in range(1, n + 1))
    return [r for r in reps if r is not None]


def check_actions_represent(k):
    """R_p represents p for every pattern with at most two incomplete labels."""
    bad = []
    pats = all_patterns(k)
    for p in pats:
        if len(bits(p.inc)) > 2:
            continue
        reps = representatives(p)
        if not all(r.is_complete() for r in reps):
            bad.append((p, None))
            continue
        for q in pats:
            if any(consistent(r, q) for r in reps) != consistent(p, q):
                bad.append((p, q))
    return bad


def check_join_step_parity(k):
    """The join recurrence on parrep families parity-represents the join on the pattern itself."""
    bad = []
    comp = complete_patterns(k)
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    for p in comp:
        fam = parrep(p)
        for i, j in pairs:
            for ell in range(1, 5):
                real = action(patadd(p, i, j), ell)
                out = Counter()
                for r in fam:
                    a = action(patadd(r, i, j), ell)
                    if a is not None:
                        out.update(parrep(a))
                odd = [s for s, n in out.items() if n % 2]
                for q in comp:
                    left = sum(1 for s in odd if consistent(s, q)) % 2
                    if left != int(real is not None and consistent(real, q)):
                        bad.append((p, (i, j), ell, q))
    return bad


def check_zeta_mobius_l0():
    """Möbius inverts zeta on every 0/1 vector over L0."""
    bad = []
    for m in range(1 << 12):
        vec = np.array([(m >> i) & 1 for i in range(12)], dtype=np.uint8)
        z = lattice.zeta(vec, 1)
        if not np.array_equal(lattice.mobius(z, 1), vec) or not np.array_equal(z, lattice.zeta_reference(vec, 1)):
            bad.append(m)
    return bad


def check_vee_product(k, samples=100, seed=0):
    rng = np.random.default_rng([seed, k])
    bad = []
    S = 12 ** k
    for idx in range(samples):
        density = rng.random()
        A = (rng.random(S) < density).astype(np.uint8)
        B = (rng.random(S) < rng.random()).astype(np.uint8)
        if not np.array_equal(lattice.vee_product_fast(A, B, k), lattice.vee_product_naive(A, B, k)):
            bad.append(idx)
    return bad


def _cs_leq(p1, p2):
    x1, z1 = p1.as_cs()
    x2, z2 = p2.as_cs()
    return x1 & ~x2 == 0 and z1 & ~z2 == 0


def check_rho(k):
    """rho is an order isomorphism that turns union and coloring join into the digitwise join."""
    bad = []
    pairs = [(p, c) for p in cs_patterns(k) for c in product(range(4), repeat=k)]
    if len(pairs) != 12 ** k:
        return [("size", len(pairs))]
    codes = [lattice.rho(p, c) for p, c in pairs]
    if sorted(codes) != list(range(12 ** k)):
        return [("not a bijection", None)]
    for s, (p, c) in zip(codes, pairs):
        back = lattice.rho_inv(s, k)
        if back != (p, c):
            bad.append(("inverse", s))
    S = np.array(codes)
    for (p1, c1), s1 in zip(pairs, codes):
        joined = lattice.join_states(s1, S, k)
        for (p2, c2), s2, sj in zip(pairs, codes, joined.tolist()):
            ordered = _cs_leq(p1, p2) and coloring_leq(c1, c2)
            if ordered != lattice.leq_states(s1, s2, k):
                bad.append(("order", s1, s2))
            if lattice.rho(pattern_union(p1, p2), coloring_join(c1, c2)) != sj:
                bad.append(("join", s1, s2))
    return bad


def check_join_maps(k):
    bad = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i == j:
                continue
            fast = dp.join_maps(k, i, j)
            ref = dp.join_map_reference(k, i, j)
            for ell in range(4):
                got = Counter(zip(fast[ell].src.tolist(), fast[ell].dst.tolist()))
                want = Counter(ref[ell])
                if {x for x, n in got.items() if n % 2} != {x for x, n in want.items() if n % 2}:
                    bad.append((i, j, ell + 1))
    return bad


def counting_mismatches(expr, seed=0, budget=None):
    """Compare root tables with the action-sequence enumeration, for every root vertex.

    For every (b, w, coloring) and complete q, the parity of table bits over
    CS-patterns consistent with q must equal the parity of valid sequences
    whose pattern is consistent with q.
    """
    k = expr.width()
    n = expr.n_vertices
    budget = n if budget is None else budget
    weights = dp.sample_weights(expr, seed, 0)
    runner = dp.Runner(expr, budget, weights)
    comp = complete_patterns(k)
    cs_cache = {}
    seq_cache = {}
    bad = []
    for v0 in range(1, n + 1):
        tab = runner.table(0, v0)
        lhs = defaultdict(list)  # (b, w, c) -> CS patterns with bit 1
        for b, w, s in tab.entries():
            p, c = lattice.rho_inv(s, k)
            lhs[(b, w, c)].append(p)
        rhs = defaultdict(list)
        for (b, w, p, c), cnt in enumerate_sequences(expr, v0, weights.values, k).items():
            if cnt % 2 and b <= budget:
                rhs[(b, w, c)].append(p)
        for key in set(lhs) | set(rhs):
            for q in comp:
                left = 0
                for p in lhs.get(key, ()):
                    hit = cs_cache.get((p, q))
                    if hit is None:
                        hit = cs_cache[(p, q)] = consistent(p, q)
                    left ^= hit
                right = 0
                for p in rhs.get(key, ()):
                    hit = seq_cache.get((p, q))
                    if hit is None:
                        hit = seq_cache[(p, q)] = consistent(p, q)
                    right ^= hit
                if left != right:
                    bad.append((v0, key, q))
    return bad


def small_expressions(count, max_k=3, max_wnodes=8, n_range=(1, 6), start=0):
    """The first ``count`` random expressions (seeds from ``start``) with at most ``max_wnodes`` weighted nodes."""
    from .random_instances import random_instance

    out = []
    seed = start
    while len(out) < count:
        e = random_instance(seed, n_range=n_range, k_range=(1, max_k), p_join=0.7)
        seed += 1
        if len(e.wnodes()) <= max_wnodes:
            out.append(e)
    return out


def disconnected_expressions(count, max_wnodes=8, start=0):
    """Disjoint unions of two small random expressions, so the root vertex misses a whole side."""
    from .random_instances import disjoint_union, random_instance

    out = []
    seed = start
    while len(out) < count:
        a = random_instance(2 * seed, n_range=(1, 3), k_range=(1, 3), p_join=0.8)
        b = random_instance(2 * seed + 1, n_range=(1, 3), k_range=(1, 3), p_join=0.8)
        seed += 1
        e = disjoint_union(a, b)
        if len(e.wnodes()) <= max_wnodes:
            out.append(e)
    return out


def run_all(max_k=2, log=print):
    """Run every suite up to width ``max_k``; True when all pass."""
    suites = [("zeta-mobius-L0", check_zeta_mobius_l0)]
    for k in range(1, max_k + 1):
        suites += [
            (f"parrep-parity k={k}", lambda k=k: check_parrep_parity(k)),
            (f"actions-represent k={k}", lambda k=k: check_actions_represent(k)),
            (f"join-step-parity k={k}", lambda k=k: check_join_step_parity(k)),
            (f"vee-product k={k}", lambda k=k: check_vee_product(k, samples=20)),
            (f"join-maps k={k}", lambda k=k: check_join_maps(k)),
        ]
        if k <= 2:
            suites.append((f"rho k={k}", lambda k=k: check_rho(k)))

    def counting():
        bad = []
        exprs = small_expressions(12, max_k=max(1, min(max_k, 3))) + disconnected_expressions(6)
        for idx, e in enumerate(exprs):
            bad += counting_mismatches(e, seed=idx)
        return bad

    suites.append(("counting-lemma", counting))
    ok = True
    for name, fn in suites:
        bad = fn()
        log(f"{'PASS' if not bad else 'FAIL'} {name}" + (f" ({len(bad)} counterexamples, first {bad[0]!r})" if bad else ""))
        ok = ok and not bad
    return ok
