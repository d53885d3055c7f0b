"""Connected odd cycle transversal on graphs given by a clique-width expression."""

from .dp import SolveResult, solve
from .expression import CliqueExpression, LinearBuilder, evaluate, parse, serialize
from .graph import LabeledGraph, verify_coct
from .oracle import brute_force_solve

__version__ = "0.1.0"

__all__ = [
    "CliqueExpression", "LabeledGraph", "LinearBuilder", "SolveResult", "brute_force_solve",
    "evaluate", "parse", "serialize", "solve", "verify_coct",
]
