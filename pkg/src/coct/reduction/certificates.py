"""Translate between satisfying assignments and budget-size solutions of a reduction instance."""

from ..graph import verify_coct
from .construct import CONN, DISC, NSTATES, full_state


def _as_mapping(sat, alpha):
    if isinstance(alpha, dict):
        missing = [v for v in range(1, sat.n + 1) if v not in alpha]
        if missing:
            raise ValueError(f"assignment misses variables {missing}")
        return {v: bool(alpha[v]) for v in range(1, sat.n + 1)}
    alpha = list(alpha)
    if len(alpha) != sat.n:
        raise ValueError(f"assignment has {len(alpha)} values for {sat.n} variables")
    return {v: bool(alpha[v - 1]) for v in range(1, sat.n + 1)}


def _path_selection(X, s):
    out = [z for idx, z in enumerate(X.zs) if idx != s]
    for y, chi in zip(X.Y, full_state(s)):
        out.extend((y.v, y.w) if chi in (CONN, DISC) else (y.u, y.z))
        out.extend(x for idx, x in enumerate(y.x) if idx != chi)
    return out


def solution_from_assignment(inst, alpha):
    """The connected odd cycle transversal of size ``inst.budget`` encoding ``alpha``."""
    sat = inst.sat
    alpha = _as_mapping(sat, alpha)
    if not sat.satisfies(alpha):
        raise ValueError("assignment does not satisfy the formula")
    S = {inst.root, inst.g1, inst.g2}
    codes = [inst.tau(ell, alpha) for ell in range(inst.s)]
    for ell, p in enumerate(codes):
        comps = inst.pi_components(p)
        for j in range(inst.c):
            dg = inst.decoding[ell][j]
            S.update(u for q, u in enumerate(dg.u) if q != p)
            S.add(dg.w[p])
            for pos, st in enumerate(comps):
                S.update(_path_selection(inst.paths[ell * inst.t + pos][j], st))
    for cg in inst.clauses:
        for i, (_, lits) in enumerate(cg.fragments, start=1):
            if any(alpha[v] == pol for v, pol in lits):
                S.add(cg.c(i))
                break
    return S


def gadget_state(X, S):
    """Index of the unique transition vertex of ``X`` missing from ``S``, else None."""
    missing = [idx for idx, z in enumerate(X.zs) if z not in S]
    return missing[0] if len(missing) == 1 else None


def extract_assignment(inst, S, verify=True):
    """A satisfying assignment read off a solution of size ``inst.budget``, or None.

    ``S`` is rejected (None) when it has the wrong size or is not a connected
    odd cycle transversal.
    """
    S = set(S)
    if len(S) != inst.budget:
        return None
    if verify and not verify_coct(inst.graph, S):
        return None
    states = []
    for row in inst.paths:
        st = [gadget_state(X, S) for X in row]
        if any(x is None for x in st):
            return None
        states.append(st)
    for sec in range(inst.n_sections):
        cols = inst.segment_columns(sec)
        if all(len({row[j] for j in cols}) == 1 for row in states):
            col = cols[0]
            break
    else:
        return None
    alpha = {}
    for ell, vs in enumerate(inst.groups):
        p = 0
        for pos in range(inst.t):
            p = p * NSTATES + states[ell * inst.t + pos][col]
        part = inst.tau_inverse(ell, p)
        if part is None:
            part = {v: False for v in vs}
        alpha.update(part)
    return alpha
