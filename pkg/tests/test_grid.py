import numpy as np
import pytest
from hypothesis import given, strategies as st

from singr import GridIndex, Mask, Volume, connectivity_offsets, neighbors, normalize_minmax


def test_neighbor_counts_interior():
    dims = (5, 5, 5)
    center = (2, 2, 2)
    assert len(neighbors(center, dims, 26)) == 26
    assert len(neighbors(center, dims, 18)) == 18
    assert len(neighbors(center, dims, 6)) == 6


def test_neighbor_corner_2cube():
    assert len(neighbors((0, 0, 0), (2, 2, 2), 26)) == 7


def test_neighbors_2d_specializations():
    dims = (5, 5, 1)
    assert len(neighbors((2, 2, 0), dims, 8)) == 8
    assert len(neighbors((2, 2, 0), dims, 4)) == 4
    # same sets as 26/6 on a single-plane grid
    assert neighbors((2, 2, 0), dims, 8) == neighbors((2, 2, 0), dims, 26)
    assert neighbors((2, 2, 0), dims, 4) == neighbors((2, 2, 0), dims, 6)


def test_neighbors_invalid_connectivity():
    with pytest.raises(ValueError):
        neighbors((0, 0, 0), (2, 2, 2), 10)


def test_neighbors_out_of_bounds_index():
    with pytest.raises(ValueError):
        neighbors((2, 0, 0), (2, 2, 2), 6)


def test_offsets_deterministic_order():
    offs = connectivity_offsets(6)
    assert offs == [(0, 0, -1), (0, -1, 0), (-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    all26 = connectivity_offsets(26)
    assert sorted(all26, key=lambda o: (o[2], o[1], o[0])) == all26


@given(st.integers(0, 2**32 - 1))
def test_neighbors_symmetric(seed):
    rng = np.random.default_rng(seed)
    dims = tuple(int(d) for d in rng.integers(1, 5, size=3))
    conn = int(rng.choice([6, 18, 26]))
    idx = GridIndex(*(int(rng.integers(0, d)) for d in dims))
    for q in neighbors(idx, dims, conn):
        assert idx in neighbors(q, dims, conn)


def test_volume_linearization_order():
    # value encodes (x, y, z, c); flat order must run x fastest, c slowest
    nx, ny, nz, c = 3, 2, 2, 2
    data = np.zeros((c, nz, ny, nx), dtype=np.float32)
    for ci in range(c):
        for z in range(nz):
            for y in range(ny):
                for x in range(nx):
                    data[ci, z, y, x] = x + nx * (y + ny * (z + nz * ci))
    vol = Volume(data)
    assert np.array_equal(vol.data.ravel(), np.arange(nx * ny * nz * c, dtype=np.float32))
    assert vol.dims == (nx, ny, nz)
    assert vol.channels == c


def test_volume_promotes_2d_and_3d():
    assert Volume(np.zeros((4, 5), dtype=np.float32)).dims == (5, 4, 1)
    assert Volume(np.zeros((2, 4, 5), dtype=np.float32)).dims == (5, 4, 2)


def test_volume_rejects_nonfinite():
    bad = np.zeros((2, 2, 2), dtype=np.float32)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError, match="finite"):
        Volume(bad)


def test_volume_rejects_bad_spacing():
    with pytest.raises(ValueError, match="spacing"):
        Volume(np.zeros((2, 2, 2), dtype=np.float32), (1.0, 0.0, 1.0))


def test_volume_immutable():
    vol = Volume(np.zeros((2, 2, 2), dtype=np.float32))
    with pytest.raises(ValueError):
        vol.data[0, 0, 0, 0] = 1.0


def test_mask_rejects_nonbinary():
    with pytest.raises(ValueError, match="binary"):
        Mask(np.array([[0.0, 0.5], [1.0, 1.0]]))


def test_mask_accepts_01_numeric():
    m = Mask(np.array([[0, 1], [1, 0]]))
    assert m.data.dtype == np.bool_
    assert m.fg_count == 2


def test_normalize_minmax_example():
    vol = Volume(np.array([0.0, 5.0, 10.0], dtype=np.float32).reshape(1, 1, 3))
    out = normalize_minmax(vol)
    assert np.allclose(out.data.ravel(), [0.0, 0.5, 1.0])


def test_normalize_constant_channel_zeros():
    vol = Volume(np.full((2, 2, 2), 7.0, dtype=np.float32))
    assert np.array_equal(normalize_minmax(vol).data, np.zeros((1, 2, 2, 2), dtype=np.float32))


def test_normalize_identity_on_unit_range():
    rng = np.random.default_rng(0)
    data = rng.random((1, 3, 4, 5), dtype=np.float32)
    data.ravel()[0] = 0.0
    data.ravel()[1] = 1.0
    vol = Volume(data)
    assert np.array_equal(normalize_minmax(vol).data, vol.data)


def test_normalize_per_channel_independent():
    data = np.stack([
        np.full((2, 2, 2), 3.0, dtype=np.float32),
        np.linspace(2, 4, 8, dtype=np.float32).reshape(2, 2, 2),
    ])
    out = normalize_minmax(Volume(data))
    assert np.array_equal(out.data[0], np.zeros((2, 2, 2), dtype=np.float32))
    assert out.data[1].min() == 0.0 and out.data[1].max() == 1.0


@given(st.integers(0, 2**32 - 1))
def test_normalize_range_property(seed):
    rng = np.random.default_rng(seed)
    data = rng.normal(0, 10, size=(2, 2, 3, 3)).astype(np.float32)
    out = normalize_minmax(Volume(data))
    assert out.data.min() >= 0.0 and out.data.max() <= 1.0
