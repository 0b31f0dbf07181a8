import struct

import numpy as np
import pytest

from singr import Mask, SeedSet, Volume


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_volume(rng, dims=None, channels=1, anisotropic=False):
    if dims is None:
        dims = tuple(int(d) for d in rng.integers(2, 13, size=3))
    nx, ny, nz = dims
    spacing = tuple(rng.uniform(0.4, 2.5, size=3)) if anisotropic else (1.0, 1.0, 1.0)
    data = rng.random((channels, nz, ny, nx), dtype=np.float32)
    return Volume(data, spacing)


def random_seeds(rng, dims, k=None):
    nx, ny, nz = dims
    n = nx * ny * nz
    if k is None:
        k = int(rng.integers(1, min(6, n) + 1))
    flat = rng.choice(n, size=k, replace=False)
    idx = np.stack([flat % nx, (flat // nx) % ny, flat // (nx * ny)], axis=1)
    return SeedSet(idx, dims)


def random_blob_mask(rng, dims=None, spacing=(1.0, 1.0, 1.0)):
    """Union of a few random boxes/balls; may be empty or full by chance."""
    if dims is None:
        dims = tuple(int(d) for d in rng.integers(3, 11, size=3))
    nx, ny, nz = dims
    zz, yy, xx = np.mgrid[0:nz, 0:ny, 0:nx]
    m = np.zeros((nz, ny, nx), dtype=bool)
    for _ in range(int(rng.integers(1, 4))):
        cx, cy, cz = rng.uniform(0, nx), rng.uniform(0, ny), rng.uniform(0, nz)
        r = rng.uniform(1.0, max(nx, ny, nz) / 2)
        m |= (xx - cx) ** 2 + (yy - cy) ** 2 + (zz - cz) ** 2 <= r**2
    return Mask(m, spacing)


def make_nifti_bytes(
    data,
    spacing=(1.0, 1.0, 1.0),
    datatype=16,
    scl_slope=0.0,
    scl_inter=0.0,
    four_d=False,
    magic=b"n+1\x00",
    sizeof_hdr=348,
    vox_offset=352.0,
):
    """Assemble a single-file NIfTI-1 byte string for reader tests.

    ``data`` is (nz, ny, nx) or (channels, nz, ny, nx); stored x-fastest.
    """
    arr = np.asarray(data)
    if arr.ndim == 3:
        arr = arr[None]
    channels, nz, ny, nx = arr.shape
    np_dtype = {2: "<u1", 4: "<i2", 16: "<f4"}[datatype]
    bitpix = {2: 8, 4: 16, 16: 32}[datatype]

    hdr = bytearray(348)
    struct.pack_into("<i", hdr, 0, sizeof_hdr)
    ndim = 4 if (four_d or channels > 1) else 3
    dim = [ndim, nx, ny, nz, channels, 1, 1, 1]
    struct.pack_into("<8h", hdr, 40, *dim)
    struct.pack_into("<h", hdr, 70, datatype)
    struct.pack_into("<h", hdr, 72, bitpix)
    pixdim = [1.0, spacing[0], spacing[1], spacing[2], 1.0, 1.0, 1.0, 1.0]
    struct.pack_into("<8f", hdr, 76, *pixdim)
    struct.pack_into("<f", hdr, 108, vox_offset)
    struct.pack_into("<2f", hdr, 112, scl_slope, scl_inter)
    struct.pack_into("<4s", hdr, 344, magic)

    payload = arr.astype(np_dtype).tobytes()
    pad = b"\x00" * (int(vox_offset) - 348) if vox_offset >= 348 else b""
    return bytes(hdr) + pad + payload
