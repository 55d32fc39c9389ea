"""Lie algebras, generators and structure constants."""

from .lie import (
    SUPPORTED_ALGEBRAS,
    LieAlgebra,
    LieAlgebraError,
    antisymmetry_residual,
    builtin_algebra,
    closure_residual,
    commutator,
    extract_structure_constants,
    jacobi_table,
    load_generators,
    verify_jacobi,
)

__all__ = [
    "SUPPORTED_ALGEBRAS",
    "LieAlgebra",
    "LieAlgebraError",
    "antisymmetry_residual",
    "builtin_algebra",
    "closure_residual",
    "commutator",
    "extract_structure_constants",
    "jacobi_table",
    "load_generators",
    "verify_jacobi",
]
