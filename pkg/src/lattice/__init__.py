"""Periodic 4D lattice and finite differences."""

from .lattice import (
    DIMENSION,
    Lattice,
    LatticeError,
    LatticeField,
    SlotKind,
    divergence,
    export_csv,
    partial,
)

__all__ = [
    "DIMENSION",
    "Lattice",
    "LatticeError",
    "LatticeField",
    "SlotKind",
    "divergence",
    "export_csv",
    "partial",
]
