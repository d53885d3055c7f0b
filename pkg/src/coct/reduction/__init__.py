"""SAT to COCT reduction used as an instance generator."""

from .certificates import extract_assignment, gadget_state, solution_from_assignment
from .construct import (
    NXT,
    SIMPLE_STATES,
    STATES,
    ReductionInstance,
    ReductionLimitError,
    build_instance,
    full_state,
    parameters,
)
from .dimacs import SatFormatError, SatInstance, format_dimacs, parse_dimacs, read_dimacs

__all__ = [
    "NXT", "SIMPLE_STATES", "STATES", "ReductionInstance", "ReductionLimitError",
    "SatFormatError", "SatInstance", "build_instance", "extract_assignment", "format_dimacs",
    "full_state", "gadget_state", "parameters", "parse_dimacs", "read_dimacs",
    "solution_from_assignment",
]
