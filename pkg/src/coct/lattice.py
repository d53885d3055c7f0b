"""The 12-element lattice L0, its k-th power and GF(2) join-products.

An element (x, y) of L0 = [3] x [4] is stored as the digit
``d = (x - 1) * 4 + (y - 1)``.  The low two bits of a digit are the color
mask (noc=0, black=1, white=2, bw=3), so the y-order is inclusion of masks.
A state of ``L0^k`` is the integer ``sum(d_i * 12**(i - 1))``; label 1 is the
least significant digit.

Vectors over ``L0^k`` are either 0/1 arrays of length ``12**k`` or packed
arrays whose state axis is the second-to-last axis (any leading and trailing
axes are carried along).  All transforms work on such arrays in place of the
XOR group, so packed ``uint64`` words are transformed 64 lanes at a time.
"""

from functools import lru_cache

import numpy as np

from .patterns import Pattern

L0_SIZE = 12


def digit(x, y):
    return (x - 1) * 4 + (y - 1)


def undigit(d):
    return d // 4 + 1, d % 4 + 1


def leq0(a, b):
    """Order of L0 on (x, y) pairs."""
    (x1, y1), (x2, y2) = a, b
    return x1 <= x2 and (y2 == 4 or y1 == 1 or y1 == y2)


def join0(a, b):
    (x1, y1), (x2, y2) = a, b
    return max(x1, x2), ((y1 - 1) | (y2 - 1)) + 1


def meet0(a, b):
    (x1, y1), (x2, y2) = a, b
    return min(x1, x2), ((y1 - 1) & (y2 - 1)) + 1


ELEMENTS = [undigit(d) for d in range(L0_SIZE)]
JOIN_DIGIT = np.array([[digit(*join0(ELEMENTS[a], ELEMENTS[b])) for b in range(12)]
                       for a in range(12)], dtype=np.int64)
LEQ_DIGIT = np.array([[leq0(ELEMENTS[a], ELEMENTS[b]) for b in range(12)]
                      for a in range(12)], dtype=bool)


def gf2_inverse(m):
    """Inverse of a square 0/1 matrix over GF(2) by Gauss-Jordan elimination."""
    m = np.array(m, dtype=np.uint8) & 1
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if len(pivots) == 0:
            raise ValueError("matrix is singular over GF(2)")
        p = col + pivots[0]
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        rows = np.nonzero(aug[:, col])[0]
        rows = rows[rows != col]
        aug[rows] ^= aug[col]
    return aug[:, n:]


# zeta[z, x] = 1 iff x <= z, so (zeta @ A)[z] sums A over the down-set of z.
ZETA = LEQ_DIGIT.T.astype(np.uint8)
MOBIUS = gf2_inverse(ZETA)


# --- states <-> (CS-pattern, coloring) -------------------------------------

def rho(p, c):
    """State index of a CS-pattern ``p`` and coloring tuple ``c`` (length k)."""
    labels, zero = p.as_cs()
    k = len(c)
    if labels >> (k + 1):
        raise ValueError(f"pattern {p!r} uses labels beyond k={k}")
    s = 0
    for i in range(k, 0, -1):
        x = 3 if zero >> i & 1 else (2 if labels >> i & 1 else 1)
        s = s * 12 + (x - 1) * 4 + c[i - 1]
    return s


def rho_inv(s, k):
    if not 0 <= s < 12 ** k:
        raise ValueError(f"state {s} out of range for k={k}")
    labels = zero = 0
    c = []
    for i in range(1, k + 1):
        d = s % 12
        s //= 12
        x = d // 4
        if x >= 1:
            labels |= 1 << i
        if x == 2:
            zero |= 1 << i
        c.append(d % 4)
    return Pattern.cs(labels, zero), tuple(c)


def digits_of(states, k):
    """Array of shape (len(states), k) with the digit of label i in column i-1."""
    states = np.asarray(states, dtype=np.int64)
    return (states[:, None] // (12 ** np.arange(k, dtype=np.int64))) % 12


def state_of_digits(d):
    d = np.asarray(d, dtype=np.int64)
    k = d.shape[-1]
    return d @ (12 ** np.arange(k, dtype=np.int64))


@lru_cache(maxsize=None)
def all_digits(k):
    return digits_of(np.arange(12 ** k), k)


@lru_cache(maxsize=None)
def empty_pattern_states(k):
    """States whose pattern is [0] (every digit has x = 1)."""
    return np.nonzero(np.all(all_digits(k) < 4, axis=1))[0]


# --- transforms along the state axis ----------------------------------------

def _factor_view(arr, k):
    """View ``arr`` (..., 12**k, tail) as (..., [3, 2, 2] * k, tail) with label k first."""
    if not arr.flags.c_contiguous:
        raise ValueError("in-place transforms need a C-contiguous array")
    lead = arr.shape[:-2]
    tail = arr.shape[-1]
    return arr.reshape(lead + (3, 2, 2) * k + (tail,)), len(lead)


def _axis(view, axis, idx):
    sl = [slice(None)] * view.ndim
    sl[axis] = idx
    return view[tuple(sl)]


def zeta_(arr, k):
    """In-place down-set transform over GF(2) along the state axis."""
    view, off = _factor_view(arr, k)
    for lab in range(k):
        ax = off + 3 * lab
        np.bitwise_xor(_axis(view, ax, 1), _axis(view, ax, 0), out=_axis(view, ax, 1))
        np.bitwise_xor(_axis(view, ax, 2), _axis(view, ax, 1), out=_axis(view, ax, 2))
        for sub in (ax + 1, ax + 2):
            np.bitwise_xor(_axis(view, sub, 1), _axis(view, sub, 0), out=_axis(view, sub, 1))
    return arr


def mobius_(arr, k):
    """In-place inverse of ``zeta_``."""
    view, off = _factor_view(arr, k)
    for lab in range(k):
        ax = off + 3 * lab
        np.bitwise_xor(_axis(view, ax, 2), _axis(view, ax, 1), out=_axis(view, ax, 2))
        np.bitwise_xor(_axis(view, ax, 1), _axis(view, ax, 0), out=_axis(view, ax, 1))
        for sub in (ax + 1, ax + 2):
            np.bitwise_xor(_axis(view, sub, 1), _axis(view, sub, 0), out=_axis(view, sub, 1))
    return arr


def _matrix_transform(vec, k, mat):
    v = np.asarray(vec, dtype=np.uint8).reshape((12,) * k)
    for ax in range(k):
        v = np.tensordot(mat, v, axes=([1], [ax])) & 1
        v = np.moveaxis(v, 0, ax)
    return np.ascontiguousarray(v).reshape(-1).astype(np.uint8)


def zeta_reference(vec, k):
    """Down-set transform using the explicit 12x12 zeta matrix per digit."""
    return _matrix_transform(vec, k, ZETA.astype(np.int64))


def mobius_reference(vec, k):
    return _matrix_transform(vec, k, MOBIUS.astype(np.int64))


def zeta(vec, k):
    """Down-set transform of a 0/1 vector of length 12**k (returns a copy)."""
    a = np.asarray(vec, dtype=np.uint8).reshape(12 ** k, 1).copy()
    return zeta_(a, k).reshape(-1)


def mobius(vec, k):
    a = np.asarray(vec, dtype=np.uint8).reshape(12 ** k, 1).copy()
    return mobius_(a, k).reshape(-1)


# --- join-products -----------------------------------------------------------

@lru_cache(maxsize=4)
def join_table(k):
    """Full table of state joins, shape (12**k, 12**k). Reference use only."""
    d = all_digits(k)
    out = np.zeros((12 ** k, 12 ** k), dtype=np.int64)
    for i in range(k):
        out += JOIN_DIGIT[d[:, None, i], d[None, :, i]] * 12 ** i
    return out


def vee_product_naive(A, B, k):
    A = np.asarray(A, dtype=np.uint8) & 1
    B = np.asarray(B, dtype=np.uint8) & 1
    xa = np.nonzero(A)[0]
    yb = np.nonzero(B)[0]
    if len(xa) == 0 or len(yb) == 0:
        return np.zeros(12 ** k, dtype=np.uint8)
    z = join_table(k)[np.ix_(xa, yb)].ravel()
    return (np.bincount(z, minlength=12 ** k) & 1).astype(np.uint8)


def vee_product_fast(A, B, k):
    za = zeta(A, k)
    zb = zeta(B, k)
    return mobius(za & zb, k)


def join_states(s, t, k):
    """Join of two state indices (scalars or arrays)."""
    s = np.asarray(s, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    out = np.zeros(np.broadcast(s, t).shape, dtype=np.int64)
    p = 1
    for _ in range(k):
        out += JOIN_DIGIT[(s // p) % 12, (t // p) % 12] * p
        p *= 12
    return out


def leq_states(s, t, k):
    p = 1
    for _ in range(k):
        if not LEQ_DIGIT[(s // p) % 12, (t // p) % 12]:
            return False
        p *= 12
    return True


def pushforward_join(arr, s2, k, out=None):
    """XOR ``arr[..., s, :]`` into ``out[..., s | s2, :]`` for every state ``s``."""
    src = arr
    d2 = [(s2 // 12 ** i) % 12 for i in range(k)]
    for lab in range(k):
        e = d2[lab]
        if e == 0:
            continue
        shape = src.shape
        lead = shape[:-2]
        inner = 12 ** lab
        outer = 12 ** (k - lab - 1)
        v = src.reshape(lead + (outer, 12, inner, shape[-1]))
        res = np.zeros_like(v)
        ax = len(lead) + 1
        for dgt in range(12):
            tgt = JOIN_DIGIT[dgt, e]
            np.bitwise_xor(_axis(res, ax, tgt), _axis(v, ax, dgt), out=_axis(res, ax, tgt))
        src = res.reshape(shape)
    if out is None:
        return src.copy() if src is arr else src
    np.bitwise_xor(out, src, out=out)
    return out

