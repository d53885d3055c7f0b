"""Labeled graphs and the polynomial-time checks behind connected odd cycle transversals."""

from collections import deque

BLACK = "black"
WHITE = "white"


class GraphFormatError(ValueError):
    pass


class LabeledGraph:
    """Undirected simple graph on vertices ``1..n`` with a label per vertex.

    Edges are stored as ``(min, max)`` tuples. Vertices without an explicit
    label get label 1.
    """

    def __init__(self, n, edges=(), labels=None):
        self.n = n
        self.adj = [set() for _ in range(n + 1)]
        self.labels = [0] + [1] * n
        for u, v in edges:
            self.add_edge(u, v)
        if labels is not None:
            items = labels.items() if isinstance(labels, dict) else enumerate(labels, start=1)
            for v, lab in items:
                self.set_label(v, lab)

    def _check_vertex(self, v):
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range 1..{self.n}")

    def add_edge(self, u, v):
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def set_label(self, v, label):
        self._check_vertex(v)
        if label < 1:
            raise ValueError(f"label {label} of vertex {v} must be >= 1")
        self.labels[v] = label

    @property
    def vertices(self):
        return range(1, self.n + 1)

    @property
    def k(self):
        return max(self.labels[1:], default=0)

    def edges(self):
        return {(u, v) for u in self.vertices for v in self.adj[u] if u < v}

    @property
    def m(self):
        return sum(len(a) for a in self.adj) // 2

    def relabeled(self, labels):
        return LabeledGraph(self.n, self.edges(), labels)

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (self.n == other.n and self.labels == other.labels
                and self.adj == other.adj)

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, m={self.m}, k={self.k})"


def is_connected(g, s):
    """True iff ``g[s]`` has at most one connected component."""
    s = set(s)
    if len(s) <= 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.adj[u]:
            if v in s and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(s)


def two_coloring(g, s=()):
    """Proper 2-coloring of ``g - s`` as a dict vertex -> color, or None."""
    removed = set(s)
    color = {}
    for root in g.vertices:
        if root in removed or root in color:
            continue
        color[root] = BLACK
        queue = deque([root])
        while queue:
            u = queue.popleft()
            other = WHITE if color[u] == BLACK else BLACK
            for v in g.adj[u]:
                if v in removed:
                    continue
                if v not in color:
                    color[v] = other
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def is_bipartite(g):
    return two_coloring(g) is not None


def verify_coct(g, s):
    """True iff ``s`` induces a connected subgraph and ``g - s`` is bipartite."""
    return is_connected(g, s) and two_coloring(g, s) is not None


def components(g, s):
    """Connected components of ``g[s]`` as a list of sets."""
    s = set(s)
    seen = set()
    comps = []
    for root in sorted(s):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if v in s and v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(comp)
    return comps


def parse_graph(text):
    """Parse the ``p graph n m`` / ``e u v`` / ``l v label`` format."""
    g = None
    declared_m = None
    edges = []
    labels = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0] == "c":
            continue
        try:
            if fields[0] == "p":
                if g is not None or len(fields) != 4 or fields[1] != "graph":
                    raise GraphFormatError(f"line {lineno}: bad header {line.strip()!r}")
                g = LabeledGraph(int(fields[2]))
                declared_m = int(fields[3])
            elif fields[0] == "e" and len(fields) == 3:
                edges.append((int(fields[1]), int(fields[2])))
            elif fields[0] == "l" and len(fields) == 3:
                labels[int(fields[1])] = int(fields[2])
            else:
                raise GraphFormatError(f"line {lineno}: unrecognized line {line.strip()!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from None
    if g is None:
        raise GraphFormatError("missing 'p graph' header")
    try:
        for u, v in edges:
            g.add_edge(u, v)
        for v, lab in labels.items():
            g.set_label(v, lab)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    if g.m != declared_m:
        raise GraphFormatError(f"header declares {declared_m} edges, found {g.m} distinct")
    return g


def format_graph(g, with_labels=True):
    edges = sorted(g.edges())
    lines = [f"p graph {g.n} {len(edges)}"]
    lines += [f"e {u} {v}" for u, v in edges]
    if with_labels:
        lines += [f"l {v} {g.labels[v]}" for v in g.vertices]
    return "\n".join(lines) + "\n"


def read_graph(path):
    with open(path) as f:
        return parse_graph(f.read())


def write_graph(g, path, with_labels=True):
    with open(path, "w", newline="\n") as f:
        f.write(format_graph(g, with_labels))
