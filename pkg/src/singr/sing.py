"""Signed normalized geodesic (SiNG) soft labels from binary masks.

Construction, given image I, mask M, blend lam and margin delta:

1. Seed a geodesic solve at the mask's boundary voxels.
2. With lam = 0 obtain a pure spatial map G0; the deepest foreground
   voxel's value is ``beta``, and the band B = {G0 <= beta} collects every
   voxel at most that far from the boundary (all of FG plus a matching
   background shell).
3. Inside B, assign sign(2M - 1) * (delta + (1 - delta) * G/tau), where G
   is the lam-blended geodesic map and tau its maximum over B.  Outside B
   every voxel is exactly -1.

The result lives in [-1, 1]: foreground in [delta, 1], in-band background
in [-1, -delta], far background -1.  With delta > 0, thresholding at 0
recovers the original mask exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .boundary import SIDES, extract_boundary
from .geodesic import GeoConfig, geodesic_raster
from .grid import Mask, Volume, _as_readonly


class DegenerateMaskWarning(UserWarning):
    """Raised when a mask has no boundary (all background or all foreground)."""


@dataclass(frozen=True)
class SingParams:
    lam: float = 0.5
    delta: float = 0.5
    side: str = "inner"
    geo: GeoConfig = field(default_factory=GeoConfig)

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lam must be in [0, 1], got {self.lam}")
        if not (0.0 <= self.delta < 1.0):
            raise ValueError(f"delta must be in [0, 1), got {self.delta}")
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")


@dataclass(frozen=True, eq=False)
class SingMap:
    """Signed soft-label grid, (nz, ny, nx) float64 in [-1, 1]."""

    values: np.ndarray
    spacing: tuple[float, float, float]
    beta: float
    tau: float
    params: SingParams
    degenerate: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _as_readonly(np.asarray(self.values, dtype=np.float64)))

    @property
    def dims(self) -> tuple[int, int, int]:
        nz, ny, nx = self.values.shape
        return (nx, ny, nz)


def _constant_map(image: Volume, params: SingParams, fill: float, tag: str) -> SingMap:
    nx, ny, nz = image.dims
    warnings.warn(f"mask is degenerate ({tag.replace('_', ' ')}); emitting constant {fill:+.0f} map",
                  DegenerateMaskWarning, stacklevel=3)
    values = np.full((nz, ny, nx), fill, dtype=np.float64)
    return SingMap(values, image.spacing, 0.0, 0.0, params, degenerate=tag)


def sing_transform(image: Volume, mask: Mask, params: SingParams = SingParams()) -> SingMap:
    """Signed normalized geodesic soft labels for ``mask`` over ``image``."""
    if image.dims != mask.dims:
        raise ValueError(f"image dims {image.dims} != mask dims {mask.dims}")
    m = mask.data
    if not m.any():
        return _constant_map(image, params, -1.0, "empty_mask")
    if m.all():
        return _constant_map(image, params, 1.0, "full_mask")

    seeds = extract_boundary(mask, params.side)
    g0 = geodesic_raster(image, seeds, 0.0, params.geo)
    glam = g0 if params.lam == 0.0 else geodesic_raster(image, seeds, params.lam, params.geo)

    beta = float(g0.values[m].max())
    band = g0.values <= beta
    tau = float(glam.values[band].max())

    sign = np.where(m, 1.0, -1.0)
    if tau > 0.0:
        magnitude = params.delta + (1.0 - params.delta) * (glam.values / tau)
        np.minimum(magnitude, 1.0, out=magnitude)  # guards FP overshoot; G <= tau on B
    else:
        magnitude = np.full_like(g0.values, params.delta)
    values = np.where(band, sign * magnitude, -1.0)
    return SingMap(values, image.spacing, beta, tau, params)


def threshold_mask(values, spacing: tuple[float, float, float] | None = None) -> Mask:
    """Binary mask of strictly positive soft-label voxels."""
    if isinstance(values, SingMap):
        if spacing is None:
            spacing = values.spacing
        values = values.values
    arr = np.asarray(values, dtype=np.float64)
    return Mask(arr > 0.0, spacing if spacing is not None else (1.0, 1.0, 1.0))
