"""Compile a CNF formula into a COCT instance with a linear clique-expression.

Vertices are numbered in the order the expression introduces them, so the
graph built here and ``evaluate(inst.expr)`` can be compared id for id.
"""

import math
from dataclasses import dataclass, field

from ..expression import LinearBuilder
from ..graph import LabeledGraph

CONN, DISC, BLACK, WHITE = range(4)
SIMPLE_STATES = ("conn", "disc", "black", "white")

C, D, B, W = CONN, DISC, BLACK, WHITE
# s1..s12 and their successors, index 0 being s1
STATES = (
    (C, C, C), (C, C, D), (C, D, B), (C, D, W), (C, B, W), (D, D, D),
    (D, D, B), (D, D, W), (D, B, W), (B, B, B), (W, W, W), (B, B, W),
)
NXT = (
    (B, B, W), (D, B, W), (D, D, W), (D, D, B), (D, D, D), (C, B, W),
    (C, D, W), (C, D, B), (C, C, D), (W, W, W), (B, B, B), (C, C, C),
)
del C, D, B, W

NSTATES = len(STATES)
RESERVED = 7  # forget, tri, root, broot, g1, g2, white
PATH_LABELS = 72

DEFAULT_MAX_VERTICES = 5_000_000
DEFAULT_MAX_PI = 12 ** 2


class ReductionLimitError(ValueError):
    pass


def full_state(s):
    """The six simple states (s, nxt(s)) a path gadget in state ``s`` assigns to Y1..Y6."""
    return STATES[s] + NXT[s]


@dataclass
class SimpleGadget:
    v: int
    u: int
    w: int
    z: int
    x: tuple  # indexed by CONN, DISC, BLACK, WHITE
    sub_black: int
    sub_white: int
    helper: int  # white neighbor that makes x_black black
    triangles: list = field(default_factory=list)

    @property
    def core(self):
        return (self.v, self.u, self.w, self.z)

    @property
    def non_triangle(self):
        return [self.v, self.u, self.w, self.z, *self.x, self.sub_black, self.sub_white]


@dataclass
class PathGadget:
    Y: list
    zs: tuple  # transition vertex per state index
    triangles: list = field(default_factory=list)

    @property
    def entries(self):
        return [y.v for y in self.Y[:3]]

    @property
    def exits(self):
        return [y.v for y in self.Y[3:]]

    @property
    def non_triangle(self):
        out = []
        for y in self.Y:
            out.extend(y.non_triangle)
        out.extend(self.zs)
        return out

    @property
    def auxiliary(self):
        return [y.helper for y in self.Y]


@dataclass
class DecodingGadget:
    u: tuple  # indexed by state assignment index
    w: tuple
    triangles: list = field(default_factory=list)

    @property
    def pairs(self):
        return list(zip(self.u, self.w))


@dataclass
class ClauseGadget:
    clause: int  # 0-based clause index h
    cycle: list  # c_1..c_{d'} followed by c_0 when present
    fragments: list  # (group, literals) ordered by group
    triangles: list = field(default_factory=list)

    def c(self, i):
        """The cycle vertex c_i (1-based), or c_0."""
        if i == 0:
            if len(self.cycle) == len(self.fragments):
                raise KeyError("this clause gadget has no c_0")
            return self.cycle[-1]
        return self.cycle[i - 1]


@dataclass
class ReductionInstance:
    sat: object
    t0: int
    t: int
    s: int
    nprime: int
    c: int
    budget: int
    graph: LabeledGraph
    expr: object
    root: int
    broot: int
    g1: int
    g2: int
    paths: list  # paths[i][j]: path sequence i, column j (0-based)
    decoding: list  # decoding[l][j]
    clauses: list  # clause gadget per column
    groups: list  # variables of each group
    guard_triangles: dict  # r/g1/g2 -> their two triangle vertices

    @property
    def k(self):
        return self.nprime + self.sat.d + 2 * 12 ** self.t + 80

    @property
    def n_pi(self):
        return 12 ** self.t

    def pi_components(self, p):
        """The t state indices of state assignment ``p`` (first component most significant)."""
        out = []
        for _ in range(self.t):
            p, r = divmod(p, NSTATES)
            out.append(r)
        return tuple(reversed(out))

    def pi_index(self, comps):
        p = 0
        for s in comps:
            p = p * NSTATES + s
        return p

    def tau(self, group, alpha):
        """State assignment index of the restriction of ``alpha`` to ``group``."""
        return sum(1 << q for q, v in enumerate(self.groups[group]) if alpha[v])

    def tau_inverse(self, group, p):
        """Assignment of the group's variables with codeword ``p``, or None if unused."""
        vs = self.groups[group]
        if p >= 1 << len(vs):
            return None
        return {v: bool(p >> q & 1) for q, v in enumerate(vs)}

    def segment_columns(self, section):
        """Columns (0-based) of section ``section`` (0-based)."""
        m = self.sat.m
        return range(section * m, (section + 1) * m)

    @property
    def n_sections(self):
        return 11 * self.nprime + 1


def parameters(n, m, t0):
    """(t, s, n', c, budget) for ``n`` variables, ``m`` clauses and group size ``t0``."""
    # smallest t with 12^t >= 2^t0, computed exactly
    t = 0
    while 12 ** t < 2 ** t0:
        t += 1
    assert t == math.ceil(t0 * math.log(2, 12) - 1e-12)
    s = -(-n // t0)
    nprime = s * t
    c = (11 * nprime + 1) * m
    budget = (41 * nprime + 12 ** t * s + 1) * c + 3
    return t, s, nprime, c, budget


def _fragments(clause, t0):
    groups = {}
    for var, pol in clause:
        groups.setdefault((var - 1) // t0, []).append((var, pol))
    return sorted((g, tuple(lits)) for g, lits in groups.items())


def _satisfying_codes(group_vars, lits):
    pol = dict(lits)
    out = []
    for a in range(1 << len(group_vars)):
        if any(v in pol and bool(a >> q & 1) == pol[v] for q, v in enumerate(group_vars)):
            out.append(a)
    return out


class _Emitter:
    """Keeps the graph edges and the expression in lock step."""

    def __init__(self, forget):
        self.lb = LinearBuilder()
        self.edges = []
        self.label = [0]
        self.members = {}
        self.forget = forget

    def new(self, label):
        v = len(self.label)
        self.label.append(label)
        self.members.setdefault(label, []).append(v)
        self.lb.intro(v, label)
        return v

    def edge(self, a, b):
        la, lb = self.label[a], self.label[b]
        assert len(self.members[la]) == 1 and len(self.members[lb]) == 1, (a, b)
        self.lb.join(la, lb)
        self.edges.append((a, b))

    def join_classes(self, i, j):
        """Join two label classes, recording all their edges."""
        self.lb.join(i, j)
        for a in self.members.get(i, ()):
            for b in self.members.get(j, ()):
                self.edges.append((a, b))

    def relabel(self, i, j):
        src = self.members.pop(i, None)
        self.lb.relabel(i, j)
        if not src:
            return
        for v in src:
            self.label[v] = j
        dst = self.members.get(j)
        if dst is None:
            self.members[j] = src
        else:
            dst.extend(src)

    def drop(self, v):
        self.relabel(self.label[v], self.forget)


def build_instance(sat, t0, max_vertices=DEFAULT_MAX_VERTICES, max_pi=DEFAULT_MAX_PI):
    """Build the reduction graph, its budget and a linear expression of width at most n' + d + 2*12^t + 80."""
    if t0 < 1:
        raise ValueError("t0 must be at least 1")
    if sat.n < 1 or sat.m < 1:
        raise ValueError("the formula needs at least one variable and one clause")
    t, s, nprime, c, budget = parameters(sat.n, sat.m, t0)
    P = 12 ** t
    if P > max_pi:
        raise ReductionLimitError(f"12^t = {P} exceeds the limit {max_pi}")
    estimate = 10 + c * (nprime * 444 + s * (3 * P + 11 * P * t) + sat.d + 3)
    if estimate > max_vertices:
        raise ReductionLimitError(f"about {estimate} vertices, limit is {max_vertices}")

    groups = [list(range(q * t0 + 1, min((q + 1) * t0, sat.n) + 1)) for q in range(s)]
    L_FORGET, L_TRI, L_ROOT, L_BROOT, L_G1, L_G2, L_WHITE = range(nprime + 1, nprime + 8)
    d = sat.d
    CL = nprime + RESERVED + 1
    DL = CL + d + 1
    PL = DL + 2 * P

    em = _Emitter(L_FORGET)

    def triangle(a, b):
        em.edge(a, b)
        x = em.new(L_TRI)
        em.edge(x, a)
        em.edge(x, b)
        em.relabel(L_TRI, L_FORGET)
        return x

    def triangle_at(a):
        x = em.new(L_TRI)
        y = em.new(L_WHITE)
        em.edge(x, a)
        em.edge(y, a)
        em.edge(x, y)
        em.relabel(L_TRI, L_FORGET)
        em.relabel(L_WHITE, L_FORGET)
        return [x, y]

    def white(a):
        em.edge(a, broot)

    def black(a):
        h = em.new(L_WHITE)
        em.edge(h, broot)
        em.edge(h, a)
        em.relabel(L_WHITE, L_FORGET)
        return h

    root = em.new(L_ROOT)
    broot = em.new(L_BROOT)
    g1 = em.new(L_G1)
    g2 = em.new(L_G2)
    em.edge(root, g1)
    em.edge(root, g2)
    guard_triangles = {root: triangle_at(root), g1: triangle_at(g1), g2: triangle_at(g2)}

    fragments = [_fragments(cl, t0) for cl in sat.clauses]
    codes = [[(g, _satisfying_codes(groups[g], lits)) for g, lits in frs] for frs in fragments]
    # pi -> component i for the decoding triangles
    comps = []
    for p in range(P):
        q, out = p, []
        for _ in range(t):
            q, r = divmod(q, NSTATES)
            out.append(r)
        comps.append(tuple(reversed(out)))

    paths = [[None] * c for _ in range(nprime)]
    decoding = [[None] * c for _ in range(s)]
    clauses = []

    for j in range(c):
        h = j % sat.m
        frs = fragments[h]
        dp_ = len(frs)
        size = dp_ if dp_ % 2 == 1 else dp_ + 1
        cyc = [em.new(CL + i) for i in range(size)]
        cg = ClauseGadget(h, cyc, frs)
        if size >= 3:
            for i in range(size):
                em.edge(cyc[i], cyc[(i + 1) % size])
        else:
            cg.triangles.extend(triangle_at(cyc[0]))
        clauses.append(cg)
        by_group = {g: (i, cs) for i, (g, cs) in enumerate(codes[h])}

        for ell in range(s):
            us, ws = [], []
            dg = DecodingGadget((), ())
            for p in range(P):
                u = em.new(DL + 2 * p)
                w = em.new(DL + 2 * p + 1)
                us.append(u)
                ws.append(w)
                dg.triangles.append(triangle(u, w))
                em.edge(root, u)
                em.edge(root, w)
            dg.u, dg.w = tuple(us), tuple(ws)
            if ell in by_group:
                i, cs = by_group[ell]
                for a in cs:
                    em.edge(cyc[i], ws[a])
            decoding[ell][j] = dg

            for pos in range(t):
                i = ell * t + pos
                X = _path_gadget(em, PL, root, triangle, white, black)
                for s_idx, z in enumerate(X.zs):
                    for p in range(P):
                        if comps[p][pos] != s_idx:
                            X.triangles.append(triangle(z, us[p]))
                if j == 0:
                    for v in X.entries:
                        em.edge(g1, v)
                else:
                    for v in X.entries:
                        em.join_classes(i + 1, em.label[v])
                if j == c - 1:
                    for v in X.exits:
                        em.edge(v, g2)
                if j > 0:
                    em.relabel(i + 1, L_FORGET)
                exits = set(X.exits)
                for v in X.non_triangle:
                    if v not in exits:
                        em.drop(v)
                for v in X.exits:
                    em.relabel(em.label[v], i + 1)
                paths[i][j] = X
            for v in us + ws:
                em.drop(v)
        for v in cyc:
            em.drop(v)

    n = len(em.label) - 1
    graph = LabeledGraph(n, em.edges, em.label[1:])
    expr = em.lb.build()
    return ReductionInstance(
        sat=sat, t0=t0, t=t, s=s, nprime=nprime, c=c, budget=budget, graph=graph, expr=expr,
        root=root, broot=broot, g1=g1, g2=g2, paths=paths, decoding=decoding, clauses=clauses,
        groups=groups, guard_triangles=guard_triangles,
    )


def _path_gadget(em, PL, root, triangle, white, black):
    Ys = []
    for q in range(6):
        base = PL + 10 * q
        v, u, w, z = (em.new(base + o) for o in range(4))
        x = tuple(em.new(base + 4 + o) for o in range(4))
        sb = em.new(base + 8)
        sw = em.new(base + 9)
        Ys.append(SimpleGadget(v, u, w, z, x, sb, sw, 0))
    zs = tuple(em.new(PL + 60 + o) for o in range(NSTATES))
    X = PathGadget(Ys, zs)
    for y in Ys:
        for a in (y.u, y.w, y.z, *y.x):
            em.edge(root, a)
        tri = y.triangles
        # every vertex of {v, w} shares a triangle with every vertex of {u, z}
        for a, b in ((y.v, y.u), (y.u, y.w), (y.w, y.z), (y.z, y.v)):
            tri.append(triangle(a, b))
        for a in range(4):
            for b in range(a + 1, 4):
                tri.append(triangle(y.x[a], y.x[b]))
        for a, b in ((y.u, y.x[BLACK]), (y.u, y.x[WHITE]), (y.w, y.x[CONN]), (y.w, y.x[DISC])):
            tri.append(triangle(a, b))
        y.helper = black(y.x[BLACK])
        white(y.x[WHITE])
        em.edge(y.v, y.sub_black)
        em.edge(y.sub_black, y.x[BLACK])
        em.edge(y.v, y.sub_white)
        em.edge(y.sub_white, y.x[WHITE])
        em.edge(y.v, y.x[DISC])
    for z in zs:
        em.edge(root, z)
    for a in range(NSTATES):
        for b in range(a + 1, NSTATES):
            X.triangles.append(triangle(zs[a], zs[b]))
    for s_idx, z in enumerate(zs):
        for q, chi in enumerate(full_state(s_idx)):
            for other in range(4):
                if other != chi:
                    X.triangles.append(triangle(z, Ys[q].x[other]))
    return X
