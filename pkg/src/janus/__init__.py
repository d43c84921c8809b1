"""Exact construction and verification of Koszul, sphere and Janus complexes."""

from .complexes import (
    ChainMap,
    GradedComplex,
    cohomology,
    check_d_squared,
    verify_chain_map,
)
from .linalg import SparseMatrix, rank

__all__ = [
    "ChainMap",
    "GradedComplex",
    "SparseMatrix",
    "check_d_squared",
    "cohomology",
    "rank",
    "verify_chain_map",
]
__version__ = "0.1.0"
