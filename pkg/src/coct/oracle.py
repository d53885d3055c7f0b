"""Brute-force ground truth: subset enumeration and direct sequence enumeration."""

from collections import Counter
from itertools import combinations, product

from .expression import INTRO, JOIN, RELABEL, evaluate
from .graph import BLACK, WHITE, components, verify_coct
from .patterns import (EMPTY, NOC, Pattern, action, coloring_join, coloring_relabel,
                       color_consistent, mask_of, patadd, pattern_relabel,
                       pattern_union, fix, forget)

MAX_SUBSET_N = 24
MAX_SEQ_WNODES = 10

_COLOR_BITS = {BLACK: 1, WHITE: 2}
ZERO_ONLY = 1  # the set {0}


class OracleTooLarge(ValueError):
    pass


def brute_force_solve(g, budget):
    """A minimum connected OCT of size <= budget, or None.

    The empty set counts as a solution when ``g`` is bipartite.
    """
    if g.n > MAX_SUBSET_N:
        raise OracleTooLarge(f"brute force limited to n <= {MAX_SUBSET_N}, got {g.n}")
    for size in range(0, min(budget, g.n) + 1):
        for s in combinations(range(1, g.n + 1), size):
            if verify_coct(g, s):
                return frozenset(s)
    return None


def all_connected_octs(g, size, containing=None):
    """Every connected OCT of the given size (optionally containing a vertex)."""
    if g.n > MAX_SUBSET_N:
        raise OracleTooLarge(f"brute force limited to n <= {MAX_SUBSET_N}, got {g.n}")
    out = []
    for s in combinations(range(1, g.n + 1), size):
        if containing is not None and containing not in s:
            continue
        if verify_coct(g, s):
            out.append(frozenset(s))
    return out


def _intro_pattern(v, v0, i):
    return Pattern.of([0, i]) if v == v0 else Pattern.of([0], [i])


def _single(k, i, color):
    c = [NOC] * k
    c[i - 1] = color
    return tuple(c)


def generate_pair(expr, v0, tau, k=None):
    """Evaluate an action-sequence ``tau`` (wnode id -> 1..4).

    Returns ``(pattern, coloring, valid)`` or None when some action is undefined.
    """
    k = k or expr.width()
    kind, a, b, right = expr.kind, expr.a, expr.b, expr.right
    val = {}
    for x in range(len(expr) - 1, -1, -1):
        kd = kind[x]
        if kd == INTRO:
            v, i = int(a[x]), int(b[x])
            t = tau[x]
            if t in (1, 2):
                p = _intro_pattern(v, v0, i)
                p = forget(p, i) if t == 1 else fix(p, i)
                val[x] = (p, (NOC,) * k, True)
            elif t in (3, 4):
                val[x] = (EMPTY, _single(k, i, 1 if t == 3 else 2), True)
            else:
                raise ValueError(f"action value {t} at introduce node {x}")
        elif kd == RELABEL:
            p, c, ok = val.pop(x + 1)
            i, j = int(a[x]), int(b[x])
            if i != j:
                p, c = pattern_relabel(p, i, j), coloring_relabel(c, i, j)
            val[x] = (p, c, ok)
        elif kd == JOIN:
            p, c, ok = val.pop(x + 1)
            i, j = int(a[x]), int(b[x])
            ok = ok and color_consistent(c[i - 1], c[j - 1])
            q = action(patadd(p, i, j), tau[x])
            if q is None:
                return None
            val[x] = (q, c, ok)
        else:
            p1, c1, ok1 = val.pop(x + 1)
            p2, c2, ok2 = val.pop(int(right[x]))
            val[x] = (pattern_union(p1, p2), coloring_join(c1, c2), ok1 and ok2)
    return val[0]


def sequence_cost(expr, tau):
    return sum(1 for x in expr.cnodes() if tau[x] in (1, 2))


def sequence_weight(expr, tau, wf):
    """``wf`` is indexed as ``wf[x][ell - 1]``."""
    return sum(int(wf[x][tau[x] - 1]) for x in expr.wnodes())


def solution_sequence(expr, S, witness):
    """pi^{S,g}: introduce node id -> 0 / 3 / 4."""
    pi = {}
    for x in expr.cnodes():
        v = int(expr.a[x])
        if v in S:
            pi[x] = 0
        else:
            pi[x] = 3 if witness[v] == BLACK else 4
    return pi


def generate_solution_pair(expr, S, witness, v0, k=None):
    """Evaluate the solution-sequence of (S, witness).

    Returns ``(pattern, coloring, valid, cost)``.
    """
    k = k or expr.width()
    S = set(S)
    pi = solution_sequence(expr, S, witness)
    kind, a, b, right = expr.kind, expr.a, expr.b, expr.right
    val = {}
    for x in range(len(expr) - 1, -1, -1):
        kd = kind[x]
        if kd == INTRO:
            v, i = int(a[x]), int(b[x])
            if pi[x] == 0:
                val[x] = (_intro_pattern(v, v0, i), (NOC,) * k, True)
            else:
                val[x] = (EMPTY, _single(k, i, 1 if pi[x] == 3 else 2), True)
        elif kd == RELABEL:
            p, c, ok = val.pop(x + 1)
            i, j = int(a[x]), int(b[x])
            if i != j:
                p, c = pattern_relabel(p, i, j), coloring_relabel(c, i, j)
            val[x] = (p, c, ok)
        elif kd == JOIN:
            p, c, ok = val.pop(x + 1)
            i, j = int(a[x]), int(b[x])
            ok = ok and color_consistent(c[i - 1], c[j - 1])
            val[x] = (patadd(p, i, j), c, ok)
        else:
            p1, c1, ok1 = val.pop(x + 1)
            p2, c2, ok2 = val.pop(int(right[x]))
            val[x] = (pattern_union(p1, p2), coloring_join(c1, c2), ok1 and ok2)
    p, c, ok = val[0]
    return p, c, ok, sum(1 for v in pi.values() if v == 0)


def solpat(g, S, v0):
    """Pattern of the components of G[S]: label sets, with 0 joined to v0's component."""
    sets = [ZERO_ONLY]
    for comp in components(g, S):
        labs = mask_of(g.labels[v] for v in comp)
        if v0 in comp:
            sets[0] = ZERO_ONLY | labs
        else:
            sets.append(labs)
    return Pattern(sets)


def solcol(g, S, witness, k):
    c = [NOC] * k
    for v in range(1, g.n + 1):
        if v not in S:
            c[g.labels[v] - 1] |= _COLOR_BITS[witness[v]]
    return tuple(c)


def is_proper(g, S, witness):
    return all(witness[u] != witness[v] for u, v in g.edges() if u not in S and v not in S)


def enumerate_sequences(expr, v0, wf=None, k=None):
    """Exact counts of valid action-sequences by (cost, weight, pattern, coloring).

    Sequences with an undefined action or an inconsistent join coloring are
    dropped.  Counts are combined per subtree (a product over independent
    choices), which is the same as iterating all ``4**|wnodes|`` sequences.
    ``wf`` is indexed ``wf[x][ell - 1]``; without it all weights are 0.
    """
    wn = expr.wnodes()
    if len(wn) > MAX_SEQ_WNODES:
        raise OracleTooLarge(f"sequence enumeration limited to |wnodes| <= {MAX_SEQ_WNODES}, got {len(wn)}")
    k = k or expr.width()
    kind, a, b, right = expr.kind, expr.a, expr.b, expr.right

    def w_of(x, ell):
        return 0 if wf is None else int(wf[x][ell - 1])

    val = {}
    for x in range(len(expr) - 1, -1, -1):
        kd = kind[x]
        acc = Counter()
        if kd == INTRO:
            v, i = int(a[x]), int(b[x])
            p = _intro_pattern(v, v0, i)
            acc[(1, w_of(x, 1), forget(p, i), (NOC,) * k)] += 1
            acc[(1, w_of(x, 2), fix(p, i), (NOC,) * k)] += 1
            acc[(0, w_of(x, 3), EMPTY, _single(k, i, 1))] += 1
            acc[(0, w_of(x, 4), EMPTY, _single(k, i, 2))] += 1
        elif kd == RELABEL:
            i, j = int(a[x]), int(b[x])
            for (cb, cw, p, c), n in val.pop(x + 1).items():
                if i != j:
                    p, c = pattern_relabel(p, i, j), coloring_relabel(c, i, j)
                acc[(cb, cw, p, c)] += n
        elif kd == JOIN:
            i, j = int(a[x]), int(b[x])
            for (cb, cw, p, c), n in val.pop(x + 1).items():
                if not color_consistent(c[i - 1], c[j - 1]):
                    continue
                pp = patadd(p, i, j)
                for ell in range(1, 5):
                    q = action(pp, ell)
                    if q is not None:
                        acc[(cb, cw + w_of(x, ell), q, c)] += n
        else:
            left = val.pop(x + 1)
            rt = val.pop(int(right[x]))
            for (b1, w1, p1, c1), n1 in left.items():
                for (b2, w2, p2, c2), n2 in rt.items():
                    acc[(b1 + b2, w1 + w2, pattern_union(p1, p2), coloring_join(c1, c2))] += n1 * n2
        val[x] = acc
    return val[0]


def enumerate_and_count(expr, v0, wf, k=None):
    """Parities of valid action-sequences keyed by (cost, weight, pattern, coloring)."""
    counts = enumerate_sequences(expr, v0, wf, k)
    return {key: n % 2 for key, n in counts.items() if n % 2}


def enumerate_naive(expr, v0, wf=None, k=None):
    """Plain loop over all action-sequences; returns a Counter like ``enumerate_sequences``."""
    wn = expr.wnodes()
    if len(wn) > MAX_SEQ_WNODES:
        raise OracleTooLarge(f"sequence enumeration limited to |wnodes| <= {MAX_SEQ_WNODES}")
    out = Counter()
    for choice in product(range(1, 5), repeat=len(wn)):
        tau = dict(zip(wn, choice))
        res = generate_pair(expr, v0, tau, k)
        if res is None or not res[2]:
            continue
        p, c, _ = res
        w = 0 if wf is None else sequence_weight(expr, tau, wf)
        out[(sequence_cost(expr, tau), w, p, c)] += 1
    return out


def oracle_decide(g, budget):
    """YES/NO from the brute-force solver."""
    return brute_force_solve(g, budget) is not None


def oracle_from_expression(expr, budget):
    return brute_force_solve(evaluate(expr), budget)


__all__ = [
    "OracleTooLarge", "brute_force_solve", "all_connected_octs", "generate_pair",
    "generate_solution_pair", "solution_sequence", "solpat", "solcol", "is_proper",
    "enumerate_sequences", "enumerate_and_count", "enumerate_naive", "sequence_cost",
    "sequence_weight", "oracle_decide", "oracle_from_expression",
]
