"""CNF instances and the DIMACS reader."""

import logging
from dataclasses import dataclass

log = logging.getLogger(__name__)


class SatFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SatInstance:
    """A CNF formula over variables ``1..n``.

    Each clause is a tuple of literals ``(variable, polarity)`` sorted by
    variable; a variable appears at most once per clause.
    """

    n: int
    clauses: tuple

    def __post_init__(self):
        if self.n < 0:
            raise SatFormatError("number of variables must be non-negative")
        norm = []
        for idx, clause in enumerate(self.clauses, start=1):
            seen = {}
            for var, pol in clause:
                if not 1 <= var <= self.n:
                    raise SatFormatError(f"clause {idx}: variable {var} out of range 1..{self.n}")
                if var in seen:
                    kind = "tautological" if seen[var] != bool(pol) else "repeated literal in"
                    raise SatFormatError(f"clause {idx}: {kind} clause on variable {var}")
                seen[var] = bool(pol)
            norm.append(tuple(sorted(seen.items())))
        object.__setattr__(self, "clauses", tuple(norm))

    @property
    def m(self):
        return len(self.clauses)

    @property
    def d(self):
        return max((len(c) for c in self.clauses), default=0)

    def satisfies(self, alpha):
        """``alpha`` maps variable -> bool (a dict or a sequence indexed from 1)."""
        return all(any(bool(alpha[v]) == pol for v, pol in c) for c in self.clauses)

    def brute_force(self):
        """A satisfying assignment as a dict, or None. Only for tiny ``n``."""
        for mask in range(1 << self.n):
            alpha = {v: bool(mask >> (v - 1) & 1) for v in range(1, self.n + 1)}
            if self.satisfies(alpha):
                return alpha
        return None


def parse_dimacs(text):
    """Parse DIMACS CNF text into a ``SatInstance``."""
    header = None
    clauses = []
    cur = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise SatFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise SatFormatError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise SatFormatError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise SatFormatError(f"line {lineno}: malformed header {line!r}")
            header = (n, m)
            continue
        if header is None:
            raise SatFormatError(f"line {lineno}: clause before the 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise SatFormatError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                if abs(lit) > header[0]:
                    raise SatFormatError(f"line {lineno}: variable {abs(lit)} out of range 1..{header[0]}")
                cur.append((abs(lit), lit > 0))
    if header is None:
        raise SatFormatError("missing 'p cnf' header")
    if cur:
        clauses.append(cur)
    if len(clauses) != header[1]:
        raise SatFormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    if any(not c for c in clauses):
        log.warning("empty clause: the instance is unsatisfiable")
    return SatInstance(header[0], tuple(tuple(c) for c in clauses))


def read_dimacs(path):
    with open(path) as f:
        return parse_dimacs(f.read())


def format_dimacs(sat):
    lines = [f"p cnf {sat.n} {sat.m}"]
    for c in sat.clauses:
        lines.append(" ".join(str(v if pol else -v) for v, pol in c) + " 0")
    return "\n".join(lines) + "\n"
