"""Periodic 4D lattice, sampled fields and central differences."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Callable

if TYPE_CHECKING:
    from typing import Self

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

DIMENSION = 4
MIN_EXTENT = 4
REAL_TOLERANCE = 1e-14


class LatticeError(ValueError):
    """Raised for invalid lattices, field shapes or axes."""


@dataclass(frozen=True)
class Lattice:
    """Periodic grid with ``extents`` sites per axis and spacing ``h``.

    Site coordinates are x_mu = h * n_mu with n_mu in [0, L_mu).
    Axis 0 corresponds to x_1."""

    extents: tuple[int, int, int, int] = (8, 8, 8, 8)
    spacing: float = 0.25

    def __post_init__(self) -> None:
        extents = tuple(int(extent) for extent in self.extents)
        if len(extents) != DIMENSION:
            raise LatticeError(f"A lattice needs {DIMENSION} extents, got {len(extents)}.")
        for axis, extent in enumerate(extents):
            if extent < MIN_EXTENT:
                raise LatticeError(
                    f"Extent of axis {axis} is {extent}; each extent must be >= {MIN_EXTENT}."
                )
        if not self.spacing > 0:
            raise LatticeError(f"Spacing must be positive, got {self.spacing}.")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def volume(self) -> int:
        """Return the number of sites."""
        return int(np.prod(self.extents))

    @property
    def box(self) -> tuple[float, ...]:
        """Return the physical length of each axis."""
        return tuple(extent * self.spacing for extent in self.extents)

    def coordinates(self, shift: np.ndarray | None = None) -> np.ndarray:
        """Return x_mu at every site, shape (4, L1, L2, L3, L4)."""
        grids = np.meshgrid(*(np.arange(extent) for extent in self.extents), indexing="ij")
        coords = self.spacing * np.stack(grids).astype(np.float64)
        if shift is not None:
            coords = coords + np.asarray(shift, dtype=np.float64).reshape(DIMENSION, 1, 1, 1, 1)
        return coords

    def site_index(self, site: tuple[int, int, int, int]) -> int:
        """Return the flat index of a site."""
        site = tuple(site)
        if len(site) != DIMENSION or not all(0 <= n < extent for n, extent in zip(site, self.extents)):
            raise LatticeError(f"Site {site} outside the lattice {self.extents}.")
        return int(np.ravel_multi_index(site, self.extents))

    def site_of(self, index: int) -> tuple[int, ...]:
        """Return the site with the given flat index."""
        if not 0 <= index < self.volume:
            raise LatticeError(f"Site index {index} outside [0, {self.volume}).")
        return tuple(int(i) for i in np.unravel_index(index, self.extents))

    def refined(self) -> Lattice:
        """Return the lattice with doubled extents and halved spacing."""
        return Lattice(
            extents=tuple(2 * extent for extent in self.extents),  # type: ignore[arg-type]
            spacing=self.spacing / 2,
        )

    def check_axis(self, axis: int) -> None:
        """Raise unless ``axis`` is a valid space-time axis."""
        if not (isinstance(axis, (int, np.integer)) and 0 <= axis < DIMENSION):
            raise LatticeError(f"Axis must be one of 0..{DIMENSION - 1}, got {axis!r}.")

    def check_values(self, values: np.ndarray) -> None:
        """Raise unless the trailing axes of ``values`` match the sites."""
        if values.ndim < DIMENSION or tuple(values.shape[-DIMENSION:]) != self.extents:
            raise LatticeError(
                f"Field shape {values.shape} does not end with the lattice extents {self.extents}."
            )

    def partial(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Central difference along ``axis`` with periodic wrap."""
        self.check_axis(axis)
        self.check_values(values)
        site_axis = values.ndim - DIMENSION + axis
        forward = np.roll(values, -1, axis=site_axis)
        backward = np.roll(values, 1, axis=site_axis)
        return (forward - backward) / (2 * self.spacing)

    def gradient(self, values: np.ndarray) -> np.ndarray:
        """Stack the four partials on a new leading axis."""
        return np.stack([self.partial(values, axis) for axis in range(DIMENSION)])

    def divergence(self, values: np.ndarray, slot: int) -> np.ndarray:
        """Contract the 4-vector slot ``slot`` with the partials."""
        self.check_values(values)
        slots = values.ndim - DIMENSION
        if not 0 <= slot < slots or values.shape[slot] != DIMENSION:
            raise LatticeError(
                f"Slot {slot} of a field with shape {values.shape} is not a 4-vector slot."
            )
        moved = np.moveaxis(values, slot, 0)
        return sum(self.partial(moved[axis], axis) for axis in range(DIMENSION))

    def laplacian(self, values: np.ndarray) -> np.ndarray:
        """Return sum_mu partial_mu partial_mu (the stride-two stencil)."""
        return sum(
            self.partial(self.partial(values, axis), axis) for axis in range(DIMENSION)
        )

    def central_stencil(
        self, function: Callable[[np.ndarray], np.ndarray], axis: int
    ) -> np.ndarray:
        """Apply the central stencil of ``partial`` to a closed-form function.

        The function is sampled at x +/- h e_axis directly, so no periodic
        wrap takes place."""
        self.check_axis(axis)
        step = np.zeros(DIMENSION)
        step[axis] = self.spacing
        forward = function(self.coordinates(step))
        backward = function(self.coordinates(-step))
        return (forward - backward) / (2 * self.spacing)

    def restrict_to_coarse(self, values: np.ndarray) -> np.ndarray:
        """Return the values at the sites shared with the next coarser lattice."""
        self.check_values(values)
        if any(extent % 2 for extent in self.extents):
            raise LatticeError(f"Lattice {self.extents} has no coarser twin.")
        index = (Ellipsis,) + (slice(None, None, 2),) * DIMENSION
        return values[index]


class SlotKind(Enum):
    """Per-site tensor slot layout of a lattice field."""

    SCALAR = "scalar"
    VECTOR = "vector"
    TENSOR = "tensor"
    ADJOINT = "adjoint"
    ADJOINT_VECTOR = "adjoint-vector"
    ADJOINT_TENSOR = "adjoint-rank2"
    MATTER = "matter"
    MATTER_VECTOR = "matter-vector"

    def slot_shape(self, adjoint: int | None = None, matter: int | None = None) -> tuple:
        """Return the expected slot shape; None stands for a free dimension."""
        return {
            SlotKind.SCALAR: (),
            SlotKind.VECTOR: (DIMENSION,),
            SlotKind.TENSOR: (DIMENSION, DIMENSION),
            SlotKind.ADJOINT: (adjoint,),
            SlotKind.ADJOINT_VECTOR: (adjoint, DIMENSION),
            SlotKind.ADJOINT_TENSOR: (adjoint, DIMENSION, DIMENSION),
            SlotKind.MATTER: (matter,),
            SlotKind.MATTER_VECTOR: (DIMENSION, matter),
        }[self]


@dataclass(frozen=True, eq=False)
class LatticeField:
    """Values sampled per site, slots first and the four site axes last."""

    lattice: Lattice
    kind: SlotKind
    values: np.ndarray
    real: bool = True

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        self.lattice.check_values(values)
        expected = self.kind.slot_shape()
        slots = values.shape[:-DIMENSION]
        if len(slots) != len(expected) or any(
            want is not None and want != got for want, got in zip(expected, slots)
        ):
            raise LatticeError(
                f"A {self.kind.value} field needs slots {expected}, got {slots}."
            )
        if self.real:
            if np.iscomplexobj(values):
                residue = np.max(np.abs(values.imag), initial=0.0)
                if residue > REAL_TOLERANCE:
                    raise LatticeError(
                        f"Field tagged real carries imaginary parts up to {residue:.3e}."
                    )
                values = values.real
            values = values.astype(np.float64, copy=False)
        else:
            values = values.astype(np.complex128, copy=False)
        object.__setattr__(self, "values", values)

    @property
    def slot_shape(self) -> tuple[int, ...]:
        """Return the per-site slot dimensions."""
        return tuple(self.values.shape[:-DIMENSION])

    @property
    def slot_count(self) -> int:
        """Return the number of values per site."""
        return int(np.prod(self.slot_shape, dtype=int))

    def norm(self) -> float:
        """Return the Euclidean norm over all sites and slots."""
        return float(np.linalg.norm(self.values.ravel()))

    def with_values(self, values: np.ndarray) -> Self:
        """Return a field of the same kind holding ``values``."""
        return type(self)(self.lattice, self.kind, values, self.real)


def partial(f: LatticeField, axis: int) -> LatticeField:
    """Central difference of a field along ``axis`` (0..3 for x_1..x_4)."""
    return f.with_values(f.lattice.partial(f.values, axis))


def divergence(v: LatticeField, slot: int = 0) -> LatticeField:
    """Sum_nu partial_nu v^nu over the 4-vector slot ``slot``; other slots broadcast."""
    values = v.lattice.divergence(v.values, slot)
    kind = {
        (SlotKind.VECTOR, 0): SlotKind.SCALAR,
        (SlotKind.TENSOR, 0): SlotKind.VECTOR,
        (SlotKind.TENSOR, 1): SlotKind.VECTOR,
        (SlotKind.ADJOINT_VECTOR, 1): SlotKind.ADJOINT,
        (SlotKind.ADJOINT_TENSOR, 1): SlotKind.ADJOINT_VECTOR,
        (SlotKind.ADJOINT_TENSOR, 2): SlotKind.ADJOINT_VECTOR,
        (SlotKind.MATTER_VECTOR, 0): SlotKind.MATTER,
    }.get((v.kind, slot))
    if kind is None:
        raise LatticeError(f"Slot {slot} of a {v.kind.value} field is not a 4-vector slot.")
    return LatticeField(v.lattice, kind, values, v.real)


def export_csv(f: LatticeField, file_path: str | Path) -> None:
    """Write a field snapshot with columns site, slot indices, re, im."""
    slots = f.slot_shape
    flat = f.values.reshape(slots + (f.lattice.volume,))
    slot_index = list(np.ndindex(*slots)) if slots else [()]
    frames = []
    for index in slot_index:
        column = flat[index]
        frame = pd.DataFrame(
            {"site": np.arange(f.lattice.volume)}
            | {f"slot{i}": np.full(f.lattice.volume, value) for i, value in enumerate(index)}
            | {"re": np.real(column), "im": np.imag(column)}
        )
        frames.append(frame)
    table = pd.concat(frames, ignore_index=True).sort_values(
        ["site"] + [f"slot{i}" for i in range(len(slots))], kind="stable"
    )
    table.to_csv(file_path, index=False, float_format="%.17g")
    logger.debug("Wrote %s field snapshot to %s", f.kind.value, file_path)
