"""Structural audit of reduction instances, shared by the unit and acceptance tests."""

from itertools import product

from coct.expression import evaluate
from coct.graph import verify_coct
from coct.reduction import extract_assignment, solution_from_assignment

# Independent copy of the gadget state tables; index 0 is s1.
C, D, B, W = "conn", "disc", "black", "white"
STATE_TABLE = [
    (C, C, C), (C, C, D), (C, D, B), (C, D, W), (C, B, W), (D, D, D),
    (D, D, B), (D, D, W), (D, B, W), (B, B, B), (W, W, W), (B, B, W),
]
NXT_TABLE = [
    (B, B, W), (D, B, W), (D, D, W), (D, D, B), (D, D, D), (C, B, W),
    (C, D, W), (C, D, B), (C, C, D), (W, W, W), (B, B, B), (C, C, C),
]


def expected_parameters(n, m, t0):
    t = next(t for t in range(64) if 12 ** t >= 2 ** t0)
    s = (n + t0 - 1) // t0
    nprime = s * t
    c = (11 * nprime + 1) * m
    return t, s, nprime, c, (41 * nprime + 12 ** t * s + 1) * c + 3


def beta_sets(inst):
    """(vertex set, lambda) for every budget-bearing vertex set of the construction."""
    out = [((v,), 1) for v in (inst.root, inst.g1, inst.g2)]
    for row in inst.paths:
        for X in row:
            for y in X.Y:
                out.append((tuple(y.x), 3))
                out.append((y.core, 2))
            out.append((tuple(X.zs), 11))
    for row in inst.decoding:
        for dg in row:
            out.extend((pair, 1) for pair in dg.pairs)
    out.extend((tuple(cg.cycle), 1) for cg in inst.clauses)
    return out


def audit(inst):
    """Every structural violation found in ``inst``, as readable strings."""
    bad = []
    sat = inst.sat
    got = (inst.t, inst.s, inst.nprime, inst.c, inst.budget)
    if got != expected_parameters(sat.n, sat.m, inst.t0):
        bad.append(f"parameters {got}")
    n_pi = 12 ** inst.t
    for i, row in enumerate(inst.paths):
        for j, X in enumerate(row):
            if len(set(X.non_triangle)) != 72 or len(X.non_triangle) != 72:
                bad.append(f"path gadget {i},{j} has {len(set(X.non_triangle))} non-triangle vertices")
    for ell, row in enumerate(inst.decoding):
        for j, dg in enumerate(row):
            flat = {v for pair in dg.pairs for v in pair}
            if len(dg.pairs) != n_pi or len(flat) != 2 * n_pi:
                bad.append(f"decoding gadget {ell},{j} has {len(dg.pairs)} pairs")
    g = evaluate(inst.expr)
    if g.n != inst.graph.n or g.adj != inst.graph.adj:
        bad.append("evaluate(expr) differs from the graph")
    k0 = sat.d + 2 * n_pi + 80
    if inst.expr.width() > inst.nprime + k0:
        bad.append(f"width {inst.expr.width()} exceeds {inst.nprime + k0}")
    if not inst.expr.is_linear():
        bad.append("expression is not linear")
    betas = beta_sets(inst)
    seen = set()
    for vs, lam in betas:
        if seen & set(vs) or len(set(vs)) != len(vs) or lam > len(vs):
            bad.append(f"beta set {vs} overlaps or is too small")
        seen |= set(vs)
    if sum(lam for _, lam in betas) != inst.budget:
        bad.append("lambda total differs from the budget")
    return bad


def satisfying_assignments(sat):
    for vals in product((False, True), repeat=sat.n):
        alpha = dict(enumerate(vals, start=1))
        if sat.satisfies(alpha):
            yield alpha


def roundtrip_failures(inst, alpha):
    """Problems with the solution built from ``alpha`` and the assignment read back from it."""
    bad = []
    S = solution_from_assignment(inst, alpha)
    if len(S) != inst.budget:
        bad.append(f"|S| = {len(S)} but budget is {inst.budget}")
    if not verify_coct(inst.graph, S):
        bad.append("solution is not a connected odd cycle transversal")
    for vs, lam in beta_sets(inst):
        if len(S & set(vs)) != lam:
            bad.append(f"solution takes {len(S & set(vs))} of {vs}, expected {lam}")
            break
    allowed = {v for vs, _ in beta_sets(inst) for v in vs}
    if not S <= allowed:
        bad.append("solution uses triangle or auxiliary vertices")
    back = extract_assignment(inst, S)
    if back is None or not inst.sat.satisfies(back):
        bad.append(f"extraction returned {back}")
    return bad
