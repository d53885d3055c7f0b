"""Compiled GF(2) polynomial kernels (numba), with a flag telling callers if they exist."""

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None


def _clmul_pairs_py(arows, brows, tgt, out):
    """Reference body; compiled by numba when available.

    For every pair (i, j) with ``tgt[i, j] >= 0`` XOR the carry-less product of
    packed rows ``arows[i]`` and ``brows[j]`` into ``out[tgt[i, j]]``.
    A 256-entry table of byte multiples of ``arows[i]`` is built once per row.
    """
    ga, nwa = arows.shape
    gb, nwb = brows.shape
    table = np.zeros((256, nwa + 1), dtype=np.uint64)
    for i in range(ga):
        for w in range(nwa):
            table[1, w] = arows[i, w]
        table[1, nwa] = 0
        for bit in range(1, 8):
            m = 1 << bit
            sh = np.uint64(bit)
            back = np.uint64(64 - bit)
            carry = np.uint64(0)
            for w in range(nwa + 1):
                v = table[1, w]
                table[m, w] = (v << sh) | carry
                carry = v >> back
        for m in range(3, 256):
            low = m & (-m)
            if low == m:
                continue
            rest = m ^ low
            for w in range(nwa + 1):
                table[m, w] = table[rest, w] ^ table[low, w]
        for j in range(gb):
            t = tgt[i, j]
            if t < 0:
                continue
            for q in range(nwb):
                word = brows[j, q]
                if word == 0:
                    continue
                for p in range(8):
                    m = (word >> np.uint64(8 * p)) & np.uint64(255)
                    if m == 0:
                        continue
                    rr = 8 * p
                    if rr == 0:
                        for w in range(nwa + 1):
                            out[t, q + w] ^= table[m, w]
                    else:
                        sh = np.uint64(rr)
                        back = np.uint64(64 - rr)
                        for w in range(nwa + 1):
                            v = table[m, w]
                            out[t, q + w] ^= v << sh
                            out[t, q + w + 1] ^= v >> back


if HAVE_NUMBA:
    clmul_pairs = numba.njit(cache=True, nogil=True)(_clmul_pairs_py)
else:  # pragma: no cover
    clmul_pairs = None


def _scatter_rows_py(rows, rb, rs, indptr, dsts, shift, nstates, out):
    """XOR ``rows[g]`` shifted up by ``shift`` bits into ``out[rb[g] * nstates + d]``
    for every target ``d`` of state ``rs[g]`` in the CSR map (indptr, dsts)."""
    g_count, nw = rows.shape
    q0 = shift // 64
    r = shift % 64
    sh = np.uint64(r)
    back = np.uint64((64 - r) % 64)
    for g in range(g_count):
        s = rs[g]
        base = rb[g] * nstates
        for e in range(indptr[s], indptr[s + 1]):
            t = base + dsts[e]
            if r == 0:
                for w in range(nw):
                    out[t, q0 + w] ^= rows[g, w]
            else:
                for w in range(nw):
                    v = rows[g, w]
                    out[t, q0 + w] ^= v << sh
                    out[t, q0 + w + 1] ^= v >> back


if HAVE_NUMBA:
    scatter_rows = numba.njit(cache=True, nogil=True)(_scatter_rows_py)
else:  # pragma: no cover
    scatter_rows = None
