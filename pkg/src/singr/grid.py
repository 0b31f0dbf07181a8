"""Voxel-grid containers and shared lattice helpers.

Conventions, fixed package-wide:

* ``dims`` is ``(nx, ny, nz)``; array storage is C-ordered ``[z, y, x]``
  (channel-major for multi-channel volumes), so a flattened buffer runs
  x fastest, then y, then z, with channel slowest.  File I/O and the
  foreign-buffer layer rely on this exact linearization.
* ``spacing`` is ``(sx, sy, sz)`` in millimetres, all positive.
* 2D data is a volume with ``nz == 1``; connectivities 4/8 are the
  ``nz == 1`` specializations of 6/26.

Containers are immutable after construction (arrays are marked read-only),
so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

VALID_CONNECTIVITIES = (4, 6, 8, 18, 26)


class GridIndex(NamedTuple):
    """A single voxel location with 0 <= x < nx, 0 <= y < ny, 0 <= z < nz."""

    x: int
    y: int
    z: int


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def _checked_spacing(spacing) -> tuple[float, float, float]:
    sp = tuple(float(s) for s in spacing)
    if len(sp) != 3:
        raise ValueError(f"spacing must have three components, got {spacing!r}")
    if any(not np.isfinite(s) or s <= 0.0 for s in sp):
        raise ValueError(f"spacing components must be positive and finite, got {sp}")
    return sp


@dataclass(frozen=True, eq=False)
class Volume:
    """Multi-channel scalar grid.

    ``data`` is float32 with shape ``(channels, nz, ny, nx)``.  2D and
    single-channel inputs are promoted: ``(ny, nx)`` and ``(nz, ny, nx)``
    arrays become one-channel volumes.
    """

    data: np.ndarray
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float32)
        if data.ndim == 2:
            data = data[None, None]
        elif data.ndim == 3:
            data = data[None]
        if data.ndim != 4 or any(s < 1 for s in data.shape):
            raise ValueError(
                f"volume data must have shape (channels, nz, ny, nx), got {np.shape(self.data)}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("volume data must be finite")
        object.__setattr__(self, "data", _as_readonly(data))
        object.__setattr__(self, "spacing", _checked_spacing(self.spacing))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def dims(self) -> tuple[int, int, int]:
        _, nz, ny, nx = self.data.shape
        return (nx, ny, nz)

    @property
    def voxel_count(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz


@dataclass(frozen=True, eq=False)
class Mask:
    """Binary grid. ``data`` is bool with shape ``(nz, ny, nx)``.

    Numeric input is accepted only if every value is exactly 0 or 1.
    """

    data: np.ndarray
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.dtype != np.bool_:
            if not np.isin(data, (0, 1)).all():
                raise ValueError("mask data must be binary (every voxel 0 or 1)")
            data = data.astype(bool)
        if data.ndim == 2:
            data = data[None]
        if data.ndim != 3 or any(s < 1 for s in data.shape):
            raise ValueError(
                f"mask data must have shape (nz, ny, nx), got {np.shape(self.data)}"
            )
        object.__setattr__(self, "data", _as_readonly(data))
        object.__setattr__(self, "spacing", _checked_spacing(self.spacing))

    @classmethod
    def from_volume(cls, volume: Volume, channel: int = 0) -> "Mask":
        """Foreground = nonzero voxels of one channel."""
        if not 0 <= channel < volume.channels:
            raise ValueError(f"channel {channel} out of range for {volume.channels}-channel volume")
        return cls(volume.data[channel] != 0, volume.spacing)

    @property
    def dims(self) -> tuple[int, int, int]:
        nz, ny, nx = self.data.shape
        return (nx, ny, nz)

    @property
    def fg_count(self) -> int:
        return int(self.data.sum())


def connectivity_offsets(connectivity: int) -> list[tuple[int, int, int]]:
    """Neighbor offsets ``(dx, dy, dz)`` for a connectivity class.

    Ordered lexicographically by (dz, dy, dx).  4 and 8 alias 6 and 26; on
    nz == 1 grids the out-of-plane offsets simply never land in bounds.
    """
    if connectivity not in VALID_CONNECTIVITIES:
        raise ValueError(
            f"connectivity must be one of {VALID_CONNECTIVITIES}, got {connectivity}"
        )
    conn = {4: 6, 8: 26}.get(connectivity, connectivity)
    max_nonzero = {6: 1, 18: 2, 26: 3}[conn]
    offsets = []
    for dz in (-1, 0, 1):
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                nonzero = (dx != 0) + (dy != 0) + (dz != 0)
                if 0 < nonzero <= max_nonzero:
                    offsets.append((dx, dy, dz))
    return offsets


def neighbors(idx, dims: tuple[int, int, int], connectivity: int = 26) -> list[GridIndex]:
    """In-bounds lattice neighbors of ``idx``, in deterministic offset order."""
    x, y, z = idx
    nx, ny, nz = dims
    if not (0 <= x < nx and 0 <= y < ny and 0 <= z < nz):
        raise ValueError(f"index {tuple(idx)} out of bounds for dims {dims}")
    out = []
    for dx, dy, dz in connectivity_offsets(connectivity):
        qx, qy, qz = x + dx, y + dy, z + dz
        if 0 <= qx < nx and 0 <= qy < ny and 0 <= qz < nz:
            out.append(GridIndex(qx, qy, qz))
    return out


def normalize_minmax(volume: Volume) -> Volume:
    """Affinely rescale each channel to [0, 1]; constant channels map to 0."""
    data = volume.data.astype(np.float64)
    out = np.zeros_like(data)
    for c in range(data.shape[0]):
        lo = data[c].min()
        hi = data[c].max()
        if hi > lo:
            out[c] = (data[c] - lo) / (hi - lo)
    return Volume(out.astype(np.float32), volume.spacing)
