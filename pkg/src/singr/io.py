"""Volume file I/O: the SVOL container and a read-only NIfTI-1 subset.

SVOL layout (little-endian, header exactly 36 bytes):

    offset  size  field
    0       4     magic "SVOL"
    4       4     version, u32, must be 1
    8       12    dims nx, ny, nz, u32 each
    20      4     channels, u32
    24      12    spacing sx, sy, sz, f32 each

followed by nx*ny*nz*channels float32 values in global linearization
order (x fastest, then y, then z, channel slowest).  Masks are stored as
0.0/1.0.  Soft-label maps additionally get a text sidecar ``<path>.meta``
with ``key=value`` lines carrying beta, tau, lambda and delta.

The NIfTI-1 reader handles single-file little-endian volumes (magic
"n+1"), datatypes uint8/int16/float32, dim[0] of 3 or 4 (dim[4] becomes
the channel count), pixdim spacing, and scl_slope/scl_inter rescaling.
Gzip input is detected by its 1f 8b signature regardless of file name.
"""

from __future__ import annotations

import gzip
import os
import struct

import numpy as np

from .grid import Mask, Volume
from .sing import SingMap

SVOL_MAGIC = b"SVOL"
SVOL_VERSION = 1
_SVOL_HEADER = struct.Struct("<4s5I3f")  # 36 bytes

NIFTI_DTYPES = {2: np.dtype("<u1"), 4: np.dtype("<i2"), 16: np.dtype("<f4")}
_NIFTI_BITPIX = {2: 8, 4: 16, 16: 32}


class SvolFormatError(ValueError):
    pass


class NiftiFormatError(ValueError):
    pass


def _payload_f32(obj) -> tuple[np.ndarray, int, tuple[int, int, int], tuple[float, float, float]]:
    if isinstance(obj, Volume):
        return obj.data.astype("<f4"), obj.channels, obj.dims, obj.spacing
    if isinstance(obj, Mask):
        return obj.data.astype("<f4"), 1, obj.dims, obj.spacing
    if isinstance(obj, SingMap):
        return obj.values.astype("<f4"), 1, obj.dims, obj.spacing
    raise TypeError(f"cannot serialize {type(obj).__name__} to SVOL")


def write_svol(obj, path: str | os.PathLike) -> None:
    """Write a Volume, Mask or SingMap; SingMap also writes its sidecar."""
    data, channels, (nx, ny, nz), (sx, sy, sz) = _payload_f32(obj)
    header = _SVOL_HEADER.pack(SVOL_MAGIC, SVOL_VERSION, nx, ny, nz, channels, sx, sy, sz)
    with open(path, "wb") as f:
        f.write(header)
        f.write(data.tobytes())
    if isinstance(obj, SingMap):
        lines = [
            f"beta={obj.beta!r}",
            f"tau={obj.tau!r}",
            f"lambda={obj.params.lam!r}",
            f"delta={obj.params.delta!r}",
        ]
        if obj.degenerate:
            lines.append(f"degenerate={obj.degenerate}")
        with open(f"{os.fspath(path)}.meta", "w") as f:
            f.write("\n".join(lines) + "\n")


def read_svol(path: str | os.PathLike) -> Volume:
    with open(path, "rb") as f:
        header = f.read(_SVOL_HEADER.size)
        if len(header) < _SVOL_HEADER.size:
            raise SvolFormatError(f"truncated header: got {len(header)} of {_SVOL_HEADER.size} bytes")
        magic, version, nx, ny, nz, channels, sx, sy, sz = _SVOL_HEADER.unpack(header)
        if magic != SVOL_MAGIC:
            raise SvolFormatError(f"bad magic {magic!r}, expected {SVOL_MAGIC!r}")
        if version != SVOL_VERSION:
            raise SvolFormatError(f"unsupported version {version}, expected {SVOL_VERSION}")
        if min(nx, ny, nz, channels) < 1:
            raise SvolFormatError(f"invalid dims/channels ({nx}, {ny}, {nz}) x {channels}")
        count = nx * ny * nz * channels
        payload = f.read(4 * count)
    if len(payload) < 4 * count:
        raise SvolFormatError(f"truncated payload: expected {4 * count} bytes, got {len(payload)}")
    data = np.frombuffer(payload, dtype="<f4").reshape(channels, nz, ny, nx)
    return Volume(data, (sx, sy, sz))


def read_svol_meta(path: str | os.PathLike) -> dict[str, str]:
    """Parse a ``<path>.meta`` sidecar into a key -> raw-string dict."""
    out: dict[str, str] = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line and "=" in line:
                key, value = line.split("=", 1)
                out[key] = value
    return out


def _nifti_raw_bytes(path: str | os.PathLike) -> bytes:
    with open(path, "rb") as f:
        raw = f.read()
    if raw[:2] == b"\x1f\x8b":
        try:
            raw = gzip.decompress(raw)
        except (OSError, EOFError) as exc:
            raise NiftiFormatError(f"corrupt gzip stream in {path}: {exc}") from exc
    return raw


def read_nifti(path: str | os.PathLike) -> Volume:
    """Read a single-file NIfTI-1 volume (the subset documented above)."""
    raw = _nifti_raw_bytes(path)
    if len(raw) < 348:
        raise NiftiFormatError(f"file too short for a NIfTI-1 header ({len(raw)} bytes)")
    (sizeof_hdr,) = struct.unpack_from("<i", raw, 0)
    if sizeof_hdr != 348:
        raise NiftiFormatError(f"malformed header: sizeof_hdr={sizeof_hdr}, expected 348 (little-endian)")
    magic = raw[344:348]
    if magic != b"n+1\x00":
        raise NiftiFormatError(f"bad magic {magic!r}: only single-file n+1 volumes are supported")

    dim = struct.unpack_from("<8h", raw, 40)
    if dim[0] not in (3, 4):
        raise NiftiFormatError(f"unsupported dimensionality dim[0]={dim[0]}")
    nx, ny, nz = dim[1], dim[2], dim[3]
    channels = dim[4] if dim[0] == 4 else 1
    if min(nx, ny, nz, channels) < 1:
        raise NiftiFormatError(f"malformed dim field {dim[:5]}")

    (datatype,) = struct.unpack_from("<h", raw, 70)
    (bitpix,) = struct.unpack_from("<h", raw, 72)
    if datatype not in NIFTI_DTYPES:
        raise NiftiFormatError(f"unsupported datatype code {datatype} (supported: 2, 4, 16)")
    if bitpix != _NIFTI_BITPIX[datatype]:
        raise NiftiFormatError(f"bitpix {bitpix} inconsistent with datatype {datatype}")

    pixdim = struct.unpack_from("<8f", raw, 76)
    spacing = pixdim[1:4]
    if any(not np.isfinite(s) or s <= 0 for s in spacing):
        raise NiftiFormatError(f"malformed pixdim spacing {spacing}")

    (vox_offset_f,) = struct.unpack_from("<f", raw, 108)
    vox_offset = int(vox_offset_f)
    if vox_offset_f != vox_offset or vox_offset < 348:
        raise NiftiFormatError(f"malformed vox_offset {vox_offset_f}")
    scl_slope, scl_inter = struct.unpack_from("<2f", raw, 112)

    dtype = NIFTI_DTYPES[datatype]
    count = nx * ny * nz * channels
    end = vox_offset + count * dtype.itemsize
    if len(raw) < end:
        raise NiftiFormatError(f"truncated data: need {end} bytes, file has {len(raw)}")
    data = np.frombuffer(raw, dtype=dtype, count=count, offset=vox_offset)
    data = data.astype(np.float32)
    if scl_slope != 0.0 and not (scl_slope == 1.0 and scl_inter == 0.0):
        data = data * np.float32(scl_slope) + np.float32(scl_inter)
    return Volume(data.reshape(channels, nz, ny, nx), spacing)


def sniff_format(path: str | os.PathLike) -> str | None:
    name = os.fspath(path).lower()
    if name.endswith(".svol"):
        return "svol"
    if name.endswith(".nii") or name.endswith(".nii.gz"):
        return "nifti"
    return None


def load_volume(path: str | os.PathLike, fmt: str | None = None) -> Volume:
    """Load by explicit format or file-name sniffing."""
    fmt = fmt or sniff_format(path)
    if fmt == "svol":
        return read_svol(path)
    if fmt == "nifti":
        return read_nifti(path)
    raise ValueError(f"cannot determine format of {path}; pass an explicit format")
