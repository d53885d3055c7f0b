"""Seeded random clique-expressions for tests, fixtures and benchmarks."""

import numpy as np

from .expression import LinearBuilder, from_tree


def _labels(rng, k):
    return int(rng.integers(1, k + 1))


def _unary_ops(rng, k, p_join, p_relabel, max_ops=3):
    """A short random list of ('e'|'r', i, j) operations."""
    ops = []
    if k < 2:
        return ops
    for _ in range(int(rng.integers(0, max_ops + 1))):
        i, j = (int(x) for x in rng.choice(np.arange(1, k + 1), size=2, replace=False))
        r = rng.random()
        if r < p_join:
            ops.append(("e", i, j))
        elif r < p_join + p_relabel:
            ops.append(("r", i, j))
    return ops


def random_linear_expression(n, k, seed=None, p_join=0.6, p_relabel=0.2, rng=None):
    """A random linear k-expression on vertices 1..n (ids in random order)."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    order = rng.permutation(np.arange(1, n + 1))
    lb = LinearBuilder()
    lb.intro(int(order[0]), _labels(rng, k))
    for v in order[1:]:
        lb.intro(int(v), _labels(rng, k))
        for tag, i, j in _unary_ops(rng, k, p_join, p_relabel):
            (lb.join if tag == "e" else lb.relabel)(i, j)
    return lb.build()


def random_expression(n, k, seed=None, p_join=0.6, p_relabel=0.2, rng=None):
    """A random k-expression with a random (possibly unbalanced) union tree."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    verts = [int(v) for v in rng.permutation(np.arange(1, n + 1))]

    def build(vs):
        if len(vs) == 1:
            node = ("v", vs[0], _labels(rng, k))
        else:
            cut = int(rng.integers(1, len(vs)))
            node = ("u", build(vs[:cut]), build(vs[cut:]))
        for tag, i, j in _unary_ops(rng, k, p_join, p_relabel):
            node = (tag, i, j, node)
        return node

    return from_tree(build(verts))


def random_instance(seed, n_range=(1, 10), k_range=(1, 3), linear_prob=0.5, p_join=0.6):
    """A random expression with n, k and shape (linear or tree) drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    build = random_linear_expression if rng.random() < linear_prob else random_expression
    return build(n, k, rng=rng, p_join=p_join)


def random_corpus(count, seed=0, n_range=(1, 10), k_range=(1, 3), bipartite_share=0.1,
                  p_join=0.7, p_relabel=0.3, max_tries=10000):
    """``count`` expressions, about ``bipartite_share`` of them with bipartite graphs.

    Non-bipartite instances are found by rejection sampling, so every
    draw is reproducible from ``seed``.
    """
    from .graph import is_bipartite
    from .expression import evaluate

    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        want_bip = rng.random() < bipartite_share
        for _ in range(max_tries):
            n = int(rng.integers(n_range[0], n_range[1] + 1))
            k = int(rng.integers(k_range[0], k_range[1] + 1))
            build = random_linear_expression if rng.random() < 0.5 else random_expression
            e = build(n, k, rng=rng, p_join=p_join, p_relabel=p_relabel)
            if is_bipartite(evaluate(e)) == want_bip:
                out.append(e)
                break
        else:
            raise RuntimeError("could not sample an instance of the requested kind")
    return out


def disjoint_union(e1, e2):
    """Expression for the disjoint union, with the vertices of ``e2`` renumbered after ``e1``."""
    from .expression import to_tree

    shift = e1.n_vertices

    def bump(t):
        if t[0] == "v":
            return ("v", t[1] + shift, t[2])
        if t[0] == "u":
            return ("u", bump(t[1]), bump(t[2]))
        return (t[0], t[1], t[2], bump(t[3]))

    return from_tree(("u", to_tree(e1), bump(to_tree(e2))))
