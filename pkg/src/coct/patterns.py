"""Connectivity patterns and the coloring lattice.

A pattern is a family of nonempty subsets of ``{0, 1, ..., k}`` in which
exactly one member (the zero-set) contains 0.  Member sets are stored as
integer bitmasks where bit ``i`` stands for element ``i``; bit 0 is the
special element 0.
"""

from itertools import combinations

ZERO = 1  # bitmask of the element 0

# Colors are subsets of {black, white} encoded as 2-bit masks.
NOC, BLACK, WHITE, BW = 0, 1, 2, 3
COLOR_NAMES = ("noc", "black", "white", "bw")


def bits(mask):
    """Positions of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements):
    m = 0
    for e in elements:
        m |= 1 << e
    return m


class Pattern:
    __slots__ = ("sets", "zero", "_hash")

    def __init__(self, sets):
        sets = frozenset(sets)
        zeros = [s for s in sets if s & ZERO]
        if len(zeros) != 1:
            raise ValueError(f"pattern needs exactly one zero-set, got {len(zeros)}")
        if 0 in sets:
            raise ValueError("pattern sets must be nonempty")
        self.sets = sets
        self.zero = zeros[0]
        self._hash = hash(sets)

    @classmethod
    def of(cls, *groups):
        """Build from element iterables, e.g. ``Pattern.of([0, 1], [2])``."""
        return cls(mask_of(g) for g in groups)

    @classmethod
    def cs(cls, labels, zero_labels):
        """CS-pattern with label set ``labels`` and zero-set ``{0} | zero_labels`` (bitmasks)."""
        if zero_labels & ~labels:
            raise ValueError("zero labels must be a subset of the labels")
        return cls([ZERO | zero_labels] + [1 << i for i in bits(labels)])

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.sets == other.sets

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def sorted_sets(self):
        rest = sorted(self.sets - {self.zero}, key=lambda m: (bits(m), m))
        return [self.zero] + rest

    def __repr__(self):
        return "[" + " | ".join(" ".join(map(str, bits(s))) for s in self.sorted_sets()) + "]"

    @property
    def lbs(self):
        m = 0
        for s in self.sets:
            m |= s
        return m & ~ZERO

    @property
    def sing(self):
        m = 0
        for s in self.sets:
            if s != ZERO and s & (s - 1) == 0:
                m |= s
        return m

    @property
    def inc(self):
        return self.lbs & ~self.sing

    def is_complete(self):
        return self.inc == 0

    def is_cs(self):
        return all(s == self.zero or s & (s - 1) == 0 for s in self.sets)

    def as_cs(self):
        """The pair ``(X, Y)`` of label masks describing a CS-pattern."""
        if not self.is_cs():
            raise ValueError(f"{self!r} is not a CS-pattern")
        return self.lbs, self.zero & ~ZERO


EMPTY = Pattern([ZERO])  # the pattern [0]


def pair_pattern(i, j):
    """The pattern [ij] = {{0}, {i, j}}."""
    return Pattern([ZERO, (1 << i) | (1 << j)])


def pattern_join(p, q):
    # Nodes are the distinct sets of p and q; edges only link a set of p to
    # an intersecting set of q.
    nodes = list(p.sets | q.sets)
    index = {s: n for n, s in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in p.sets:
        for b in q.sets:
            if a & b:
                ra, rb = find(index[a]), find(index[b])
                if ra != rb:
                    parent[ra] = rb
    merged = {}
    for s, n in index.items():
        r = find(n)
        merged[r] = merged.get(r, 0) | s
    return Pattern(merged.values())


def pattern_relabel(p, i, j):
    bi, bj = 1 << i, 1 << j
    return Pattern((s & ~bi) | bj if s & bi else s for s in p.sets)


def pattern_union(p, q):
    return Pattern((p.sets - {p.zero}) | (q.sets - {q.zero}) | {p.zero | q.zero})


def patadd(p, i, j):
    need = (1 << i) | (1 << j)
    if p.lbs & need == need:
        return pattern_join(p, pair_pattern(i, j))
    return p


def fix(p, i):
    if p.inc >> i & 1:
        return Pattern(p.sets | {1 << i})
    return p


def forget(p, i):
    if p.inc >> i & 1:
        bi = 1 << i
        return Pattern(s & ~bi for s in p.sets if s & ~bi)
    return p


def action(p, ell):
    """Complete representative for action ``ell`` in 1..4, or None when undefined."""
    if not 1 <= ell <= 4:
        raise ValueError(f"action index {ell} not in 1..4")
    inc = bits(p.inc)
    if not inc:
        return p
    if len(inc) == 1:
        i = inc[0]
        if ell == 1:
            return fix(p, i)
        if ell == 2:
            return forget(p, i)
        return None
    if len(inc) == 2:
        i, j = inc
        first = fix if ell in (1, 2) else forget
        if ell == 4:
            return _forget_label(forget(p, i), j)
        second = fix if ell in (1, 3) else forget
        return second(first(p, i), j)
    return None


def _forget_label(p, j):
    """Drop ``j`` from every set, even when forgetting another label left ``{j}`` behind.

    A set that becomes empty stands for a component with no live label; no
    pattern is consistent with that, so the result is undefined.
    """
    bj = 1 << j
    sets = [s & ~bj for s in p.sets]
    if not all(sets):
        return None
    return Pattern(sets)


def consistent(p, q):
    return len(pattern_join(p, q)) == 1


def parrep(p):
    """Parity representation of a complete pattern as a set of CS-patterns."""
    if not p.is_complete():
        raise ValueError(f"parrep needs a complete pattern, got {p!r}")
    big = sorted(s for s in p.sets if s != p.zero and s & (s - 1))
    family = {p}
    for s_i in big:
        members = bits(s_i)
        subsets = [mask_of(c) for r in range(len(members)) for c in combinations(members, r)]
        nxt = set()
        for q in family:
            rest = q.sets - {q.zero, s_i}
            for sub in subsets:
                # duplicates must cancel, so toggle one pattern at a time
                nxt ^= {Pattern(rest | {q.zero | sub})}
        family = nxt
    return family


# --- enumeration helpers -------------------------------------------------

def all_patterns(k):
    """Every pattern over labels 1..k."""
    full = (1 << (k + 1)) - 1
    zero_sets = [m for m in range(1, full + 1) if m & ZERO]
    others = [m for m in range(1, full + 1) if not m & ZERO]
    out = []
    for z in zero_sets:
        for r in range(len(others) + 1):
            for combo in combinations(others, r):
                out.append(Pattern((z,) + combo))
    return out


def complete_patterns(k):
    return [p for p in all_patterns(k) if p.is_complete()]


def cs_patterns(k):
    out = []
    for x in range(0, 1 << (k + 1), 2):
        y = x
        while True:
            out.append(Pattern.cs(x, y))
            if y == 0:
                break
            y = (y - 1) & x
    return out


# --- colors ---------------------------------------------------------------

def color_join(a, b):
    return a | b


def color_meet(a, b):
    return a & b


def color_leq(a, b):
    return a & ~b == 0


def color_consistent(a, b):
    return a & b == NOC


def coloring_join(c1, c2):
    return tuple(a | b for a, b in zip(c1, c2))


def coloring_relabel(c, i, j):
    """Relabel ``i -> j`` on a coloring tuple indexed by label - 1."""
    out = list(c)
    out[j - 1] = c[i - 1] | c[j - 1]
    out[i - 1] = NOC
    return tuple(out)


def coloring_leq(c1, c2):
    return all(color_leq(a, b) for a, b in zip(c1, c2))
