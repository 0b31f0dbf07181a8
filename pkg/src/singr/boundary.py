"""Morphological boundary extraction for binary masks.

A foreground voxel is on the inner boundary when at least one in-bounds
face neighbor (6-connectivity; 4 on nz == 1 grids) is background; the
outer boundary mirrors this for background voxels touching foreground.
Voxels on the grid edge do not count as boundary just for touching the
edge: only an actual in-bounds opposite-class neighbor qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geodesic import SeedSet
from .grid import Mask

SIDES = ("inner", "outer", "both")


@dataclass(frozen=True, eq=False)
class BoundarySet(SeedSet):
    side: str = "inner"

    def __post_init__(self):
        super().__post_init__()
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")


def _touches_other_class(m: np.ndarray, other: np.ndarray) -> np.ndarray:
    """True where a voxel of interest has an in-bounds face neighbor in ``other``."""
    hit = np.zeros_like(m, dtype=bool)
    hit[1:, :, :] |= other[:-1, :, :]
    hit[:-1, :, :] |= other[1:, :, :]
    hit[:, 1:, :] |= other[:, :-1, :]
    hit[:, :-1, :] |= other[:, 1:, :]
    hit[:, :, 1:] |= other[:, :, :-1]
    hit[:, :, :-1] |= other[:, :, 1:]
    return hit


def inner_boundary_mask(mask_array: np.ndarray) -> np.ndarray:
    """(nz, ny, nx) bool: FG voxels facing at least one in-bounds BG voxel."""
    m = np.asarray(mask_array, dtype=bool)
    return m & _touches_other_class(m, ~m)


def outer_boundary_mask(mask_array: np.ndarray) -> np.ndarray:
    """(nz, ny, nx) bool: BG voxels facing at least one in-bounds FG voxel."""
    m = np.asarray(mask_array, dtype=bool)
    return (~m) & _touches_other_class(m, m)


def extract_boundary(mask: Mask, side: str = "inner") -> BoundarySet:
    """Boundary voxels of ``mask`` as a seed set, in scan order.

    Constant masks (all FG or all BG) have no boundary and yield an
    empty set.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    if side == "inner":
        sel = inner_boundary_mask(mask.data)
    elif side == "outer":
        sel = outer_boundary_mask(mask.data)
    else:
        sel = inner_boundary_mask(mask.data) | outer_boundary_mask(mask.data)
    base = SeedSet.from_mask(sel)
    return BoundarySet(base.indices, base.dims, side)
