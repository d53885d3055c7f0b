"""The randomized dynamic program over a clique-expression.

Each node gets a table ``T[b, w]`` of GF(2) vectors over the ``12**k``
states.  Tables are stored bit-packed along the weight axis: ``data`` has
shape ``(nb, 12**k, nwords)`` of ``uint64`` and bit ``p`` of word ``q``
holds weight ``w0 + 64 * q + p``.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import lattice
from .expression import INTRO, JOIN, RELABEL, UNION, evaluate
from .graph import is_bipartite
from ._kernels import HAVE_NUMBA, clmul_pairs, scatter_rows
from .lattice import JOIN_DIGIT, all_digits, empty_pattern_states, mobius_, zeta_
from .patterns import (EMPTY, Pattern, action, fix, forget, patadd, parrep,
                       color_consistent)

log = logging.getLogger(__name__)

WORD = 64
MAX_K = 6
_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class Table:
    """Sparse-in-weight GF(2) table for one node."""

    __slots__ = ("data", "w0")

    def __init__(self, data, w0):
        self.data = data
        self.w0 = w0

    @property
    def nb(self):
        return self.data.shape[0]

    @property
    def nwords(self):
        return self.data.shape[2]

    def is_empty(self):
        return self.data.size == 0 or not self.data.any()

    def get(self, b, w):
        """0/1 vector over states for slice (b, w)."""
        S = self.data.shape[1]
        p = w - self.w0
        if not 0 <= b < self.nb or not 0 <= p < WORD * self.nwords:
            return np.zeros(S, dtype=np.uint8)
        q, r = divmod(p, WORD)
        return ((self.data[b, :, q] >> np.uint64(r)) & np.uint64(1)).astype(np.uint8)

    def entries(self):
        """Set of (b, w, state) triples with bit 1."""
        out = set()
        if self.data.size == 0:
            return out
        bits = np.unpackbits(self.data.view(np.uint8), axis=2, bitorder="little")
        for b, s, p in zip(*np.nonzero(bits)):
            out.add((int(b), int(self.w0 + p), int(s)))
        return out

    def slices(self):
        """Map (b, w) -> sorted tuple of states with bit 1."""
        out = {}
        for b, w, s in sorted(self.entries()):
            out.setdefault((b, w), []).append(s)
        return {key: tuple(v) for key, v in out.items()}

    @classmethod
    def from_entries(cls, entries, k, nb=None):
        """Build from (b, w, state) triples; repeated triples cancel."""
        entries = list(entries)
        S = 12 ** k
        if not entries:
            return cls(np.zeros((nb or 0, S, 0), dtype=np.uint64), 0)
        w0 = min(w for _, w, _ in entries)
        span = max(w for _, w, _ in entries) - w0 + 1
        nb = nb or max(b for b, _, _ in entries) + 1
        data = np.zeros((nb, S, -(-span // WORD)), dtype=np.uint64)
        for b, w, s in entries:
            q, r = divmod(w - w0, WORD)
            data[b, s, q] ^= np.uint64(1) << np.uint64(r)
        return cls(data, w0)

    def __repr__(self):
        return f"Table(nb={self.nb}, words={self.nwords}, w0={self.w0})"


def _empty(nb, S):
    return Table(np.zeros((nb, S, 0), dtype=np.uint64), 0)


def _shifted(arr, r):
    """``arr`` shifted up by ``r`` bits (0 <= r < 64) with one extra word."""
    out = np.zeros(arr.shape[:-1] + (arr.shape[-1] + 1,), dtype=np.uint64)
    if r == 0:
        out[..., :-1] = arr
        return out
    np.left_shift(arr, np.uint64(r), out=out[..., :-1])
    out[..., 1:] |= arr >> np.uint64(WORD - r)
    return out


def _place(out, arr, offset):
    """XOR ``arr`` into ``out`` starting at bit ``offset`` of the last axis."""
    q, r = divmod(offset, WORD)
    n = arr.shape[-1]
    if r == 0:
        out[..., q:q + n] ^= arr
    else:
        out[..., q:q + n + 1] ^= _shifted(arr, r)


def _trim(data, w0):
    """Drop all-zero words at both ends and all-zero trailing budgets."""
    if data.size == 0:
        return Table(data, w0)
    used_w = np.nonzero(data.any(axis=(0, 1)))[0]
    if len(used_w) == 0:
        return _empty(0, data.shape[1])
    lo, hi = used_w[0], used_w[-1] + 1
    used_b = np.nonzero(data.any(axis=(1, 2)))[0]
    nb = used_b[-1] + 1
    if lo or hi < data.shape[2] or nb < data.shape[0]:
        data = np.ascontiguousarray(data[:nb, :, lo:hi])
    return Table(data, w0 + WORD * int(lo))


# --- state maps -------------------------------------------------------------

class StateMap:
    """A GF(2) linear map given by (src, dst) pairs, applied as a pushforward."""

    def __init__(self, src, dst):
        order = np.argsort(dst, kind="stable")
        self.src = np.asarray(src, dtype=np.int64)[order]
        dst = np.asarray(dst, dtype=np.int64)[order]
        self.dst = dst
        if len(dst):
            change = np.nonzero(np.diff(dst))[0] + 1
            self.starts = np.concatenate([[0], change]).astype(np.int64)
            self.targets = dst[self.starts]
        else:
            self.starts = np.zeros(0, dtype=np.int64)
            self.targets = np.zeros(0, dtype=np.int64)
        # the same pairs grouped by source, for row-wise scattering
        by_src = np.argsort(self.src, kind="stable")
        self.csr_dst = dst[by_src]
        self.size = int(self.src.max(initial=-1)) + 1
        self.indptr = np.zeros(self.size + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.src, minlength=self.size), out=self.indptr[1:])

    def scatter(self, rb, rs, rows, shift, nstates, out):
        """XOR each row shifted by ``shift`` bits into every image of its state."""
        keep = rs < self.size
        scatter_rows(rows[keep], rb[keep], rs[keep], self.indptr, self.csr_dst, shift, nstates, out)

    def apply(self, data):
        out = np.zeros_like(data)
        if len(self.src) == 0 or data.size == 0:
            return out
        gathered = data[:, self.src, :]
        out[:, self.targets, :] = np.bitwise_xor.reduceat(gathered, self.starts, axis=1)
        return out


@lru_cache(maxsize=None)
def relabel_map(k, i, j):
    d = all_digits(k).copy()
    d[:, j - 1] = JOIN_DIGIT[d[:, i - 1], d[:, j - 1]]
    d[:, i - 1] = 0
    dst = lattice.state_of_digits(d)
    return StateMap(np.arange(12 ** k), dst)


@lru_cache(maxsize=None)
def _local_join_rules(i_before_j):
    """For digit pairs (d_i, d_j): per action index, the resulting digit pairs.

    Computed with the pattern algebra on two labels; ``lo``/``hi`` play the
    roles of the smaller/larger of the joined labels.
    """
    li, lj = (1, 2) if i_before_j else (2, 1)
    rules = {}
    for di in range(12):
        for dj in range(12):
            ci, cj = di % 4, dj % 4
            if not color_consistent(ci, cj):
                continue
            c = [0, 0]
            dig = [0, 0]
            dig[li - 1], dig[lj - 1] = di, dj
            c[li - 1], c[lj - 1] = ci, cj
            p, _ = lattice.rho_inv(dig[0] + 12 * dig[1], 2)
            pp = patadd(p, li, lj)
            per_ell = []
            for ell in range(1, 5):
                a = action(pp, ell)
                outs = []
                if a is not None:
                    for q in parrep(a):
                        s = lattice.rho(q, tuple(c))
                        nd = (s % 12, s // 12)
                        outs.append((nd[li - 1], nd[lj - 1]))
                per_ell.append(outs)
            rules[(di, dj)] = per_ell
    return rules


@lru_cache(maxsize=None)
def join_maps(k, i, j):
    """Four StateMaps, one per action index, for a join node on labels i, j."""
    rules = _local_join_rules(i < j)
    d = all_digits(k)
    states = np.arange(12 ** k, dtype=np.int64)
    pi, pj = 12 ** (i - 1), 12 ** (j - 1)
    src = [[] for _ in range(4)]
    dst = [[] for _ in range(4)]
    key = d[:, i - 1] * 12 + d[:, j - 1]
    for (di, dj), per_ell in rules.items():
        sel = states[key == di * 12 + dj]
        if len(sel) == 0:
            continue
        for ell, outs in enumerate(per_ell):
            for ni, nj in outs:
                src[ell].append(sel)
                dst[ell].append(sel + (ni - di) * pi + (nj - dj) * pj)
    return tuple(StateMap(np.concatenate(s) if s else [], np.concatenate(t) if t else [])
                 for s, t in zip(src, dst))


def join_map_reference(k, i, j):
    """Same maps as ``join_maps`` computed directly on full patterns (slow)."""
    pairs = [[] for _ in range(4)]
    for s in range(12 ** k):
        p, c = lattice.rho_inv(s, k)
        if not color_consistent(c[i - 1], c[j - 1]):
            continue
        pp = patadd(p, i, j)
        for ell in range(1, 5):
            a = action(pp, ell)
            if a is None:
                continue
            for q in parrep(a):
                pairs[ell - 1].append((s, lattice.rho(q, c)))
    return pairs


# --- node recurrences ---------------------------------------------------------

def introduce_entries(k, label, is_root_vertex, weights, budget):
    """The four (b, w, state) entries of an introduce node."""
    i = label
    p = Pattern.of([0, i]) if is_root_vertex else Pattern.of([0], [i])
    noc = (0,) * k
    black = tuple(1 if t == i - 1 else 0 for t in range(k))
    white = tuple(2 if t == i - 1 else 0 for t in range(k))
    out = []
    if budget >= 1:
        out.append((1, int(weights[0]), lattice.rho(forget(p, i), noc)))
        out.append((1, int(weights[1]), lattice.rho(fix(p, i), noc)))
    out.append((0, int(weights[2]), lattice.rho(EMPTY, black)))
    out.append((0, int(weights[3]), lattice.rho(EMPTY, white)))
    return out


def table_introduce(k, label, is_root_vertex, weights, budget):
    entries = introduce_entries(k, label, is_root_vertex, weights, budget)
    return Table.from_entries(entries, k, nb=min(budget, 1) + 1)


def table_relabel(child, k, i, j):
    if i == j or child.data.size == 0:
        return child
    m = relabel_map(k, i, j)
    if not HAVE_NUMBA:
        return Table(m.apply(child.data), child.w0)
    nb, S, nw = child.data.shape
    rb, rs, rows = _groups(child.data)
    out = np.zeros((nb * S, nw), dtype=np.uint64)
    m.scatter(rb, rs, rows, 0, S, out)
    return Table(out.reshape(nb, S, nw), child.w0)


def table_join(child, k, i, j, weights):
    if child.data.size == 0:
        return child
    maps = join_maps(k, i, j)
    weights = [int(w) for w in weights]
    base = min(weights)
    extra = -(-(max(weights) - base) // WORD) + 1
    nb, S, nw = child.data.shape
    if HAVE_NUMBA:
        rb, rs, rows = _groups(child.data)
        flat = np.zeros((nb * S, nw + extra), dtype=np.uint64)
        for m, w in zip(maps, weights):
            m.scatter(rb, rs, rows, w - base, S, flat)
        return _trim(flat.reshape(nb, S, -1), child.w0 + base)
    out = np.zeros((nb, S, nw + extra), dtype=np.uint64)
    for m, w in zip(maps, weights):
        _place(out, m.apply(child.data), w - base)
    return _trim(out, child.w0 + base)


def _groups(data):
    """Nonzero (b, s) rows of a table: budgets, states and the packed rows."""
    bs, ss = np.nonzero(data.any(axis=2))
    return bs, ss, data[bs, ss]


def union_sparse(A, B, k, budget):
    """Union by pairing nonzero rows directly, looping over the bit positions of B.

    Cost is about (set bits of B) * (nonzero rows of A) * (words of A).
    """
    nbA, S, nwA = A.data.shape
    nbB, _, nwB = B.data.shape
    nb = min(nbA + nbB - 1, budget + 1)
    out = np.zeros((nb, S, nwA + nwB + 1), dtype=np.uint64)
    ab, as_, arows = _groups(A.data)
    bb, bs, brows = _groups(B.data)
    if len(ab) == 0 or len(bb) == 0:
        return _empty(0, S)
    bbits = _to_bits(brows).astype(bool)  # (GB, 64 * nwB)
    tgt_s = lattice.join_states(as_[:, None], bs[None, :], k)
    tgt_b = ab[:, None] + bb[None, :]
    rows = np.arange(len(ab))
    shifted = {}
    for pos in np.nonzero(bbits.any(axis=0))[0].tolist():
        sel = np.nonzero(bbits[:, pos])[0]
        q, r = divmod(pos, WORD)
        if r not in shifted:
            shifted[r] = _shifted(arows, r)
        tb = tgt_b[:, sel]
        keep = tb < nb
        if not keep.any():
            continue
        ia = np.broadcast_to(rows[:, None], tb.shape)[keep]
        view = out[:, :, q:q + nwA + 1]
        np.bitwise_xor.at(view, (tb[keep], tgt_s[:, sel][keep]), shifted[r][ia])
    return _trim(out, A.w0 + B.w0)


def union_pairs(A, B, k, budget):
    """Union by compiled carry-less products of every pair of nonzero rows."""
    nbA, S, nwA = A.data.shape
    nbB, _, nwB = B.data.shape
    nb = min(nbA + nbB - 1, budget + 1)
    ab, as_, arows = _groups(A.data)
    bb, bs, brows = _groups(B.data)
    if len(ab) == 0 or len(bb) == 0:
        return _empty(0, S)
    tb = ab[:, None] + bb[None, :]
    tgt = np.where(tb < nb, tb * S + lattice.join_states(as_[:, None], bs[None, :], k), -1)
    out = np.zeros((nb * S, nwA + nwB + 1), dtype=np.uint64)
    clmul_pairs(np.ascontiguousarray(arows), np.ascontiguousarray(brows), tgt, out)
    return _trim(out.reshape(nb, S, -1), A.w0 + B.w0)


def union_rowfft(A, B, k, budget, chunk_bytes=1 << 26):
    """Union by pairing nonzero rows, multiplying each pair of weight polynomials by FFT.

    Integer convolutions are exact in float64 at these sizes; parity is
    taken after rounding, so partial sums over chunks can be XORed.
    """
    nbA, S, nwA = A.data.shape
    nbB, _, nwB = B.data.shape
    nb = min(nbA + nbB - 1, budget + 1)
    ab, as_, arows = _groups(A.data)
    bb, bs, brows = _groups(B.data)
    out = np.zeros((nb, S, nwA + nwB), dtype=np.uint64)
    if len(ab) == 0 or len(bb) == 0:
        return _empty(0, S)
    L = WORD * (nwA + nwB)
    nfft = 1 << (L - 1).bit_length()
    fa = np.fft.rfft(_to_bits(arows).astype(np.float64), n=nfft, axis=-1)
    fb = np.fft.rfft(_to_bits(brows).astype(np.float64), n=nfft, axis=-1)
    I, J = np.nonzero(ab[:, None] + bb[None, :] < nb)
    tb = ab[I] + bb[J]
    ts = lattice.join_states(as_[I], bs[J], k)
    key = tb * S + ts
    order = np.argsort(key, kind="stable")
    I, J, key = I[order], J[order], key[order]
    step = max(1, chunk_bytes // (16 * fa.shape[1]))
    for lo in range(0, len(key), step):
        hi = min(len(key), lo + step)
        kc = key[lo:hi]
        starts = np.concatenate([[0], np.nonzero(np.diff(kc))[0] + 1])
        acc = np.add.reduceat(fa[I[lo:hi]] * fb[J[lo:hi]], starts, axis=0)
        conv = np.fft.irfft(acc, n=nfft, axis=-1)[:, :L]
        ints = np.rint(conv)
        if np.abs(conv - ints).max(initial=0.0) > 0.25:
            raise ArithmeticError("FFT convolution lost integer precision")
        bits = (ints.astype(np.int64) & 1).astype(np.uint8)
        tk = kc[starts]
        out[tk // S, tk % S] ^= _from_bits(bits)
    return _trim(out, A.w0 + B.w0)


def _clmul_shift(A, B, nb):
    """Per-state GF(2) polynomial product via shift-and-mask over the bits of B."""
    nbA, S, nwA = A.shape
    nbB, _, nwB = B.shape
    out = np.zeros((nb, S, nwA + nwB + 1), dtype=np.uint64)
    bbits = np.unpackbits(B.view(np.uint8), axis=2, bitorder="little").astype(bool)
    active = np.nonzero(bbits.any(axis=1))  # (b2, bitpos)
    by_r = {}
    for b2, pos in zip(*active):
        if b2 < nb:
            by_r.setdefault(int(pos) % WORD, []).append((int(b2), int(pos)))
    for r, items in by_r.items():
        Ar = _shifted(A, r)
        for b2, pos in items:
            top = min(nbA, nb - b2)
            mask = np.where(bbits[b2, :, pos], _ONES, np.uint64(0))[None, :, None]
            q = pos // WORD
            out[b2:b2 + top, :, q:q + nwA + 1] ^= Ar[:top] & mask
    return out


def _to_bits(data):
    return np.unpackbits(data.view(np.uint8), axis=-1, bitorder="little")


def _from_bits(bits):
    n = bits.shape[-1]
    pad = (-n) % WORD
    if pad:
        bits = np.concatenate([bits, np.zeros(bits.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


def _clmul_fft(A, B, nb, chunk_elems=1 << 22):
    """Per-state GF(2) polynomial product through an exact float FFT convolution."""
    nbA, S, nwA = A.shape
    nbB, _, nwB = B.shape
    LA, LB = WORD * nwA, WORD * nwB
    L = LA + LB
    nfft = 1 << (L - 1).bit_length()
    out = np.zeros((nb, S, nwA + nwB), dtype=np.uint64)
    step = max(1, chunk_elems // (nfft * max(nbA, nbB, nb)))
    for lo in range(0, S, step):
        hi = min(S, lo + step)
        fa = np.fft.rfft(_to_bits(A[:, lo:hi]).astype(np.float64), n=nfft, axis=-1)
        fb = np.fft.rfft(_to_bits(B[:, lo:hi]).astype(np.float64), n=nfft, axis=-1)
        for b in range(nb):
            acc = None
            for b1 in range(max(0, b - nbB + 1), min(nbA, b + 1)):
                term = fa[b1] * fb[b - b1]
                acc = term if acc is None else acc + term
            if acc is None:
                continue
            conv = np.fft.irfft(acc, n=nfft, axis=-1)[:, :L]
            bits = (np.rint(conv).astype(np.int64) & 1).astype(np.uint8)
            out[b, lo:hi] = _from_bits(bits)
    return out


def union_transform(A, B, k, budget, method="fft"):
    """Zeta both sides, multiply weight polynomials per state, then Moebius."""
    nbA, S, nwA = A.data.shape
    nbB, _, nwB = B.data.shape
    nb = min(nbA + nbB - 1, budget + 1)
    za = zeta_(A.data.copy(), k)
    zb = zeta_(B.data.copy(), k)
    if method == "shift":
        if nbB * nwB > nbA * nwA:
            za, zb = zb, za
        out = _clmul_shift(za, zb, nb)
    else:
        out = _clmul_fft(za, zb, nb)
    mobius_(out, k)
    return _trim(out, A.w0 + B.w0)


def _popcount(data):
    return int(np.bitwise_count(data).sum())


def _plan_union(A, B):
    """Pick the cheapest union kernel from rough per-element costs (nanoseconds)."""
    nbA, S, nwA = A.data.shape
    nbB, _, nwB = B.data.shape
    nb = nbA + nbB - 1
    ga = int(A.data.any(axis=2).sum())
    gb = int(B.data.any(axis=2).sum())
    nfft = 1 << (WORD * (nwA + nwB) - 1).bit_length()
    logn = nfft.bit_length()
    plans = [
        (11 * _popcount(B.data) * ga * (nwA + 1), "sparse", False),
        (11 * _popcount(A.data) * gb * (nwB + 1), "sparse", True),
        (40 * ga * gb * (nfft // 2) + (ga + gb + min(ga * gb, nb * S)) * nfft * logn // 2, "rowfft", False),
        (S * ((nbA + nbB + nb) * nfft * logn + 10 * nbA * nbB * (nfft // 2)), "fft", False),
        (S * min(nbA * nwA, nbB * nwB) * WORD * max(nbA * nwA, nbB * nwB), "shift", False),
    ]
    if HAVE_NUMBA:
        per_pair = 8 * (nwA + 2)
        plans.append((2 * per_pair * int(np.count_nonzero(B.data)) * ga, "pairs", False))
        plans.append((2 * (8 * (nwB + 2)) * int(np.count_nonzero(A.data)) * gb, "pairs", True))
    cost, method, swap = min(plans)
    return method, swap


def table_union(A, B, k, budget, method="auto"):
    """``method`` is one of auto, pairs, sparse, rowfft, shift, fft."""
    if A.data.size == 0 or B.data.size == 0:
        return _empty(0, 12 ** k)
    if method == "auto":
        method, swap = _plan_union(A, B)
        if swap:
            A, B = B, A
    if method == "sparse":
        return union_sparse(A, B, k, budget)
    if method == "pairs":
        return union_pairs(A, B, k, budget)
    if method == "rowfft":
        return union_rowfft(A, B, k, budget)
    return union_transform(A, B, k, budget, method=method)


# --- weights ----------------------------------------------------------------------

@dataclass
class WeightAssignment:
    W: int
    values: np.ndarray  # shape (nodes, 4); rows of non-weighted nodes are zero

    def wmax(self):
        return int(np.count_nonzero(self.values[:, 0])) * self.W


def sample_weights(expr, seed, trial=None):
    """Uniform weights in [1, W] with W = 8 * |wnodes| for every weighted node."""
    wn = expr.wnodes()
    W = 8 * len(wn)
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF] + ([] if trial is None else [int(trial)])
    rng = np.random.default_rng(key)
    values = np.zeros((len(expr), 4), dtype=np.int64)
    values[wn] = rng.integers(1, W + 1, size=(len(wn), 4))
    return WeightAssignment(W, values)


# --- driver --------------------------------------------------------------------------

class Runner:
    """Tables for one weight assignment, shared across choices of the root vertex.

    Subtrees that do not contain the chosen root vertex have tables that do not
    depend on it; those are cached for union children and reused.
    """

    def __init__(self, expr, budget, weights, k=None, collect=False):
        self.expr = expr
        self.k = k or expr.width()
        if self.k > MAX_K:
            raise ValueError(f"width {self.k} too large: 12^{self.k} states exceed the supported limit (k <= {MAX_K})")
        self.S = 12 ** self.k
        self.budget = budget
        self.weights = weights
        self.kind = expr.kind.tolist()
        self.a = expr.a.tolist()
        self.b = expr.b.tolist()
        self.right = expr.right.tolist()
        self.end = expr.end.tolist()
        self.cacheable = set()
        for x, kd in enumerate(self.kind):
            if kd == UNION:
                self.cacheable.add(x + 1)
                self.cacheable.add(self.right[x])
        self.free = {}
        # nodes joined to the root by unions and relabels only; a pattern with a
        # label can't lose it there, so only [0]-pattern rows can reach a root check
        self.root_chain = set()
        stack = [0]
        while stack:
            y = stack.pop()
            self.root_chain.add(y)
            if self.kind[y] in (UNION, RELABEL):
                stack.extend(self._children(y))
        self.intro_of = expr.intro_node_of()
        self.collect = collect
        self.collected = {}
        self.timings = {UNION: 0.0, JOIN: 0.0, RELABEL: 0.0, INTRO: 0.0}

    def _children(self, x):
        kd = self.kind[x]
        if kd == INTRO:
            return ()
        if kd == UNION:
            return (x + 1, self.right[x])
        return (x + 1,)

    def _combine(self, x, kids, v0node):
        kd = self.kind[x]
        t = time.perf_counter()
        if kd == INTRO:
            tab = table_introduce(self.k, self.b[x], x == v0node, self.weights.values[x], self.budget)
        elif kd == RELABEL:
            tab = table_relabel(kids[0], self.k, self.a[x], self.b[x])
        elif kd == JOIN:
            tab = table_join(kids[0], self.k, self.a[x], self.b[x], self.weights.values[x])
        else:
            tab = table_union(kids[0], kids[1], self.k, self.budget)
        self.timings[kd] += time.perf_counter() - t
        return tab

    def table(self, x=0, v0=None, empty_only=False):
        """Table at node ``x`` for root vertex ``v0`` (None: no root vertex).

        With ``empty_only`` the tables on the root chain keep only [0]-pattern
        rows; the root table is then exact on those rows and zero elsewhere.
        """
        v0node = None if v0 is None else self.intro_of[v0]
        end = self.end
        results = {}
        stack = [(x, False)]
        while stack:
            y, expanded = stack.pop()
            cut = empty_only and y in self.root_chain
            free = v0node is None or not (y <= v0node < end[y])
            if free and (y, cut) in self.free:
                results[y] = self.free[(y, cut)]
                continue
            kids = self._children(y)
            if not expanded:
                stack.append((y, True))
                stack.extend((c, False) for c in kids)
                continue
            tab = self._combine(y, [results.pop(c) for c in kids], v0node)
            if cut:
                tab = _keep_states(tab, empty_pattern_states(self.k))
            if free and y in self.cacheable:
                self.free[(y, cut)] = tab
            if self.collect:
                self.collected[y] = tab
            results[y] = tab
        return results[x]

    def witnessed(self, v0):
        """Budgets b in 1..budget with a [0]-pattern bit at the root."""
        return witnessed_budgets(self.table(0, v0, empty_only=True), self.k)


def _keep_states(tab, states):
    if tab.data.size == 0:
        return tab
    data = np.zeros_like(tab.data)
    data[:, states, :] = tab.data[:, states, :]
    return _trim(data, tab.w0)


def witnessed_budgets(tab, k):
    if tab.data.size == 0:
        return set()
    hits = tab.data[:, empty_pattern_states(k), :].any(axis=(1, 2))
    return {b for b in np.nonzero(hits)[0].tolist() if b >= 1}


def run_fixed_root(expr, v0, budget, weights):
    return Runner(expr, budget, weights).witnessed(v0)


@dataclass
class SolveResult:
    answer: bool
    reason: str
    trials_run: int = 0
    roots_run: int = 0
    witness: tuple = None  # (trial, v0, b)
    stats: dict = field(default_factory=dict)


def _trial(expr, budget, seed, trial, stop=None):
    weights = sample_weights(expr, seed, trial)
    runner = Runner(expr, budget, weights)
    runs = 0
    for v0 in range(1, expr.n_vertices + 1):
        if stop is not None and stop():
            break
        runs += 1
        hit = runner.witnessed(v0)
        if hit:
            return (trial, v0, min(hit)), runs
    return None, runs


def solve(expr, budget, trials=20, seed=0, threads=1, graph=None):
    """Monte-Carlo decision: is there a connected OCT of size at most ``budget``?

    YES answers are always correct; a NO answer on a YES instance has
    probability at most 2**-trials.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    g = graph if graph is not None else evaluate(expr)
    k = expr.width()
    stats = {"n": g.n, "k": k, "wnodes": len(expr.wnodes()), "nodes": len(expr)}
    stats["W"] = 8 * stats["wnodes"]
    stats["wmax"] = stats["W"] * stats["wnodes"]
    if is_bipartite(g):
        return SolveResult(True, "bipartite", stats=stats)
    if budget == 0:
        return SolveResult(False, "not bipartite", stats=stats)
    if k > MAX_K:
        raise ValueError(f"width {k} too large (k <= {MAX_K} supported)")
    roots = 0
    if threads <= 1:
        for t in range(trials):
            hit, runs = _trial(expr, budget, seed, t)
            roots += runs
            if hit:
                return SolveResult(True, "witness", t + 1, roots, hit, stats)
        return SolveResult(False, "no witness", trials, roots, None, stats)
    found = []

    def task(t):
        hit, runs = _trial(expr, budget, seed, t, stop=lambda: bool(found))
        if hit:
            found.append(hit)
        return hit, runs

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(task, range(trials)))
    roots = sum(r for _, r in results)
    hits = sorted(h for h, _ in results if h)
    if hits:
        return SolveResult(True, "witness", trials, roots, hits[0], stats)
    return SolveResult(False, "no witness", trials, roots, None, stats)


def witness_profile(expr, max_budget, trials=20, seed=0):
    """Smallest witnessed budget per (trial, v0) with tables up to ``max_budget``.

    ``solve(expr, B, trials, seed)`` says YES exactly when the graph is
    bipartite or some entry is at most ``B`` (for ``B <= max_budget``).
    """
    prof = {}
    for t in range(trials):
        runner = Runner(expr, max_budget, sample_weights(expr, seed, t))
        for v0 in range(1, expr.n_vertices + 1):
            hit = runner.witnessed(v0)
            prof[(t, v0)] = min(hit) if hit else None
    return prof
