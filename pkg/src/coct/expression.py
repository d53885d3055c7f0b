"""Clique-expressions: parsing, serialization, evaluation and node sets.

Nodes are stored in preorder in flat arrays.  Node 0 is the root, the first
child of node ``x`` is ``x + 1`` and the right child of a union node is
``right[x]``.  The subtree of ``x`` occupies the index range
``[x, end[x])``.
"""

import re

import numpy as np

from .graph import LabeledGraph

INTRO, UNION, RELABEL, JOIN = 0, 1, 2, 3
KIND_CODES = {"v": INTRO, "u": UNION, "r": RELABEL, "e": JOIN}
KIND_NAMES = "vure"


class ExpressionError(ValueError):
    pass


class CliqueExpression:
    """A clique-expression in preorder array form.

    ``a``/``b`` hold (vertex id, label) for introduce nodes and the two labels
    ``i``/``j`` for relabel and join nodes.
    """

    def __init__(self, kind, a, b, right):
        self.kind = np.asarray(kind, dtype=np.int8)
        self.a = np.asarray(a, dtype=np.int64)
        self.b = np.asarray(b, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self._end = None
        self._validate()

    def __len__(self):
        return len(self.kind)

    def _validate(self):
        n = len(self.kind)
        if n == 0:
            raise ExpressionError("empty expression")
        kind = self.kind.tolist()
        a = self.a.tolist()
        b = self.b.tolist()
        if min(b) < 1 or min(a) < 1:
            raise ExpressionError("labels and vertex ids must be >= 1")
        ids = [a[x] for x in range(n) if kind[x] == INTRO]
        if len(set(ids)) != len(ids):
            seen = set()
            dup = next(v for v in ids if v in seen or seen.add(v))
            raise ExpressionError(f"duplicate vertex id {dup}")
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise ExpressionError(f"vertex ids must be exactly 1..{len(ids)}")
        for x in range(n):
            if kind[x] == JOIN and a[x] == b[x]:
                raise ExpressionError(f"join at node {x} has equal labels {a[x]}")
        if self.end[0] != n:
            raise ExpressionError("malformed node arrays")

    @property
    def end(self):
        if self._end is None:
            kind = self.kind.tolist()
            right = self.right.tolist()
            n = len(kind)
            end = [0] * n
            for x in range(n - 1, -1, -1):
                k = kind[x]
                if k == INTRO:
                    end[x] = x + 1
                elif k == UNION:
                    r = right[x]
                    if not x + 1 < r < n or end[x + 1] != r:
                        raise ExpressionError(f"bad right child at node {x}")
                    end[x] = end[r]
                else:
                    if x + 1 >= n:
                        raise ExpressionError(f"missing child at node {x}")
                    end[x] = end[x + 1]
            self._end = np.asarray(end, dtype=np.int64)
        return self._end

    def children(self, x):
        k = self.kind[x]
        if k == INTRO:
            return ()
        if k == UNION:
            return (x + 1, int(self.right[x]))
        return (x + 1,)

    @property
    def n_vertices(self):
        return int(np.count_nonzero(self.kind == INTRO))

    def width(self):
        return int(max(self.b.max(), self.a[self.kind != INTRO].max(initial=0)))

    def is_linear(self):
        u = np.nonzero(self.kind == UNION)[0]
        return bool(np.all(self.kind[self.right[u]] == INTRO))

    def cnodes(self, x=0):
        lo, hi = x, int(self.end[x])
        return (np.nonzero(self.kind[lo:hi] == INTRO)[0] + lo).tolist()

    def wnodes(self, x=0):
        lo, hi = x, int(self.end[x])
        seg = self.kind[lo:hi]
        return (np.nonzero((seg == INTRO) | (seg == JOIN))[0] + lo).tolist()

    def intro_node_of(self):
        """Map vertex id -> introduce node index."""
        idx = np.nonzero(self.kind == INTRO)[0]
        return dict(zip(self.a[idx].tolist(), idx.tolist()))

    def structurally_equal(self, other):
        return (len(self) == len(other)
                and np.array_equal(self.kind, other.kind)
                and np.array_equal(self.a, other.a)
                and np.array_equal(self.b, other.b)
                and np.array_equal(self.right, other.right))

    def __repr__(self):
        return f"CliqueExpression(nodes={len(self)}, vertices={self.n_vertices}, width={self.width()})"


# --- construction helpers --------------------------------------------------

def from_tree(tree):
    """Build from nested tuples: ``('v', id, lab)``, ``('u', L, R)``,
    ``('r', i, j, E)``, ``('e', i, j, E)``."""
    kind, a, b, right = [], [], [], []
    stack = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, int):  # marker: right child starts here
            right[item] = len(kind)
            continue
        tag = item[0]
        x = len(kind)
        kind.append(KIND_CODES[tag])
        right.append(0)
        if tag == "v":
            a.append(item[1])
            b.append(item[2])
        elif tag == "u":
            a.append(1)
            b.append(1)
            stack.append(item[2])
            stack.append(x)
            stack.append(item[1])
        else:
            a.append(item[1])
            b.append(item[2])
            stack.append(item[3])
    return CliqueExpression(kind, a, b, right)


def to_tree(e, x=0):
    """Inverse of ``from_tree`` (recursive; intended for small expressions)."""
    k = e.kind[x]
    if k == INTRO:
        return ("v", int(e.a[x]), int(e.b[x]))
    if k == UNION:
        return ("u", to_tree(e, x + 1), to_tree(e, int(e.right[x])))
    return (KIND_NAMES[k], int(e.a[x]), int(e.b[x]), to_tree(e, x + 1))


class LinearBuilder:
    """Accumulates a linear expression as a log of operations.

    The first call must be ``intro``; every later ``intro`` is unioned onto the
    expression built so far.
    """

    def __init__(self):
        self.ops = []  # (kind, a, b)

    def intro(self, vertex, label):
        self.ops.append((INTRO, vertex, label))

    def relabel(self, i, j):
        self.ops.append((RELABEL, i, j))

    def join(self, i, j):
        self.ops.append((JOIN, i, j))

    def build(self):
        ops = self.ops
        if not ops or ops[0][0] != INTRO:
            raise ExpressionError("linear expression must start with an introduce")
        steps = ops[1:]
        n_unions = sum(1 for op in steps if op[0] == INTRO)
        spine = len(steps) + 1  # spine nodes incl. the first introduce
        total = spine + n_unions
        kind = np.empty(total, dtype=np.int8)
        a = np.empty(total, dtype=np.int64)
        b = np.empty(total, dtype=np.int64)
        right = np.zeros(total, dtype=np.int64)
        T = len(steps)
        kind[T], a[T], b[T] = ops[0]
        u = 0
        # the step with index t (1-based) sits at preorder position T - t
        for t, (k, x, y) in enumerate(steps, start=1):
            pos = T - t
            if k == INTRO:
                rpos = T + 1 + u
                u += 1
                kind[pos], a[pos], b[pos] = UNION, 1, 1
                right[pos] = rpos
                kind[rpos], a[rpos], b[rpos] = INTRO, x, y
            else:
                kind[pos], a[pos], b[pos] = k, x, y
        return CliqueExpression(kind, a, b, right)


# --- text format -----------------------------------------------------------

_TOKEN = re.compile(r";[^\n]*|\(|\)|[^\s();]+|\s+")


def _line_col(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse(text, max_label=None):
    """Parse the S-expression format into a ``CliqueExpression``."""
    kind, a, b, right = [], [], [], []
    # stack entries: [node index, tag, fields read, children read]
    stack = []
    done = False

    def err(msg, offset):
        line, col = _line_col(text, offset)
        raise ExpressionError(f"line {line}, column {col}: {msg}")

    for m in _TOKEN.finditer(text):
        tok = m.group()
        pos = m.start()
        c = tok[0]
        if c.isspace() or c == ";":
            continue
        if done:
            err(f"unexpected trailing token {tok!r}", pos)
        if tok == "(":
            if stack:
                top = stack[-1]
                need = 3 if top[1] == "v" else (0 if top[1] == "u" else 2)
                if top[1] == "v" or top[2] < need:
                    err("unexpected '('", pos)
                if (top[1] in "re" and top[3] >= 1) or (top[1] == "u" and top[3] >= 2):
                    err("too many subexpressions", pos)
                if top[1] == "u" and top[3] == 1:
                    right[top[0]] = len(kind)
            stack.append([len(kind), None, 0, 0, pos])
            kind.append(-1)
            a.append(1)
            b.append(1)
            right.append(0)
            continue
        if tok == ")":
            if not stack:
                err("unbalanced ')'", pos)
            top = stack.pop()
            tag = top[1]
            if tag is None:
                err("empty form", pos)
            if tag == "v" and top[2] < 2:
                err("introduce needs a vertex id and a label", pos)
            if tag in "re" and (top[2] < 2 or top[3] != 1):
                err(f"'{tag}' needs two labels and one subexpression", pos)
            if tag == "u" and top[3] != 2:
                err("union needs two subexpressions", pos)
            x = top[0]
            if tag == "e" and a[x] == b[x]:
                err(f"join labels must differ (both {a[x]})", top[4])
            if stack:
                stack[-1][3] += 1
            else:
                done = True
            continue
        # atom
        if not stack:
            err(f"expected '(' but found {tok!r}", pos)
        top = stack[-1]
        x = top[0]
        if top[1] is None:
            if tok not in KIND_CODES:
                err(f"unknown operation {tok!r}", pos)
            top[1] = tok
            kind[x] = KIND_CODES[tok]
            continue
        if top[1] == "u" or top[2] >= 2 or top[3] > 0:
            err(f"unexpected atom {tok!r}", pos)
        try:
            val = int(tok)
        except ValueError:
            err(f"expected an integer, found {tok!r}", pos)
        if val < 1:
            err(f"value {val} must be >= 1", pos)
        is_label = top[1] != "v" or top[2] == 1
        if is_label and max_label is not None and val > max_label:
            err(f"label {val} exceeds width {max_label}", pos)
        if top[2] == 0:
            a[x] = val
        else:
            b[x] = val
        top[2] += 1
    if stack:
        err("unexpected end of input", len(text))
    if not done:
        err("no expression found", len(text))
    ids = [a[x] for x in range(len(kind)) if kind[x] == INTRO]
    if len(set(ids)) != len(ids):
        seen = set()
        dup = next(v for v in ids if v in seen or seen.add(v))
        raise ExpressionError(f"duplicate vertex id {dup}")
    return CliqueExpression(kind, a, b, right)


def serialize(e):
    """Canonical single-line text form."""
    kind = e.kind.tolist()
    a = e.a.tolist()
    b = e.b.tolist()
    end = e.end.tolist()
    parts = []
    closers = []  # (position where the subtree ends, count of ')' to emit)
    for x in range(len(kind)):
        k = kind[x]
        if k == INTRO:
            parts.append(f"(v {a[x]} {b[x]})")
        elif k == UNION:
            parts.append("(u")
        else:
            parts.append(f"({KIND_NAMES[k]} {a[x]} {b[x]}")
        if k != INTRO:
            closers.append(end[x])
        while closers and closers[-1] == x + 1:
            closers.pop()
            parts.append(")")
    out = []
    for p in parts:
        if out and p != ")":
            out.append(" ")
        out.append(p)
    return "".join(out) + "\n"


def read_expression(path, max_label=None):
    with open(path) as f:
        return parse(f.read(), max_label)


def write_expression(e, path):
    with open(path, "w", newline="\n") as f:
        f.write(serialize(e))


# --- evaluation --------------------------------------------------------------

def evaluate(e):
    """The labeled graph built by ``e``."""
    kind = e.kind.tolist()
    a = e.a.tolist()
    b = e.b.tolist()
    right = e.right.tolist()
    n = e.n_vertices
    edges = set()
    results = {}
    for x in range(len(kind) - 1, -1, -1):
        k = kind[x]
        if k == INTRO:
            results[x] = {b[x]: [a[x]]}
        elif k == UNION:
            left = results.pop(x + 1)
            other = results.pop(right[x])
            if len(left) < len(other):
                left, other = other, left
            for lab, vs in other.items():
                cur = left.get(lab)
                if cur is None:
                    left[lab] = vs
                elif len(cur) >= len(vs):
                    cur.extend(vs)
                else:
                    vs.extend(cur)
                    left[lab] = vs
            results[x] = left
        elif k == RELABEL:
            m = results.pop(x + 1)
            i, j = a[x], b[x]
            if i != j and i in m:
                src = m.pop(i)
                dst = m.get(j)
                if dst is None:
                    m[j] = src
                elif len(dst) >= len(src):
                    dst.extend(src)
                else:
                    src.extend(dst)
                    m[j] = src
            results[x] = m
        else:
            m = results.pop(x + 1)
            vi = m.get(a[x], ())
            vj = m.get(b[x], ())
            for u in vi:
                for v in vj:
                    edges.add((u, v) if u < v else (v, u))
            results[x] = m
    labels = [0] * (n + 1)
    for lab, vs in results[0].items():
        for v in vs:
            labels[v] = lab
    g = LabeledGraph(n)
    adj = g.adj
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    g.labels = labels
    return g
