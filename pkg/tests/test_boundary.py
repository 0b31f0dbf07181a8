import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singr import (
    GeoConfig,
    Mask,
    Volume,
    extract_boundary,
    geodesic_raster,
    inner_boundary_mask,
)

from conftest import random_blob_mask


def cube_mask(outer=7, inner=3):
    m = np.zeros((outer, outer, outer), dtype=bool)
    lo = (outer - inner) // 2
    m[lo : lo + inner, lo : lo + inner, lo : lo + inner] = True
    return Mask(m)


def test_cube_inner_boundary_excludes_center():
    mask = cube_mask()
    b = extract_boundary(mask, "inner")
    assert len(b) == 26
    sel = b.to_mask()
    assert not sel[3, 3, 3]
    assert (sel <= mask.data).all()


def test_single_voxel_is_its_own_boundary():
    m = np.zeros((3, 3, 3), dtype=bool)
    m[1, 1, 1] = True
    b = extract_boundary(Mask(m), "inner")
    assert b.indices.tolist() == [[1, 1, 1]]


def test_constant_masks_have_empty_boundary():
    assert len(extract_boundary(Mask(np.zeros((3, 3, 3), dtype=bool)))) == 0
    assert len(extract_boundary(Mask(np.ones((3, 3, 3), dtype=bool)))) == 0
    assert len(extract_boundary(Mask(np.ones((3, 3, 3), dtype=bool)), "outer")) == 0


def test_grid_edge_voxels_need_inbounds_bg():
    # slab filling half the grid: its border-touching faces are not boundary
    m = np.zeros((4, 4, 4), dtype=bool)
    m[:2] = True
    b = extract_boundary(Mask(m), "inner")
    sel = b.to_mask()
    assert sel[1].all() and not sel[0].any()


def test_outer_boundary_disjoint_from_mask(rng):
    mask = random_blob_mask(rng)
    outer = extract_boundary(mask, "outer").to_mask()
    assert not (outer & mask.data).any()


def test_both_is_union(rng):
    mask = random_blob_mask(rng)
    inner = extract_boundary(mask, "inner").to_mask()
    outer = extract_boundary(mask, "outer").to_mask()
    both = extract_boundary(mask, "both").to_mask()
    assert np.array_equal(both, inner | outer)


def test_translation_equivariance():
    m = np.zeros((8, 8, 8), dtype=bool)
    m[2:5, 2:5, 2:5] = True
    b1 = inner_boundary_mask(m)
    b2 = inner_boundary_mask(np.roll(m, (1, 1, 1), axis=(0, 1, 2)))
    assert np.array_equal(np.roll(b1, (1, 1, 1), axis=(0, 1, 2)), b2)


def test_invalid_side():
    with pytest.raises(ValueError, match="side"):
        extract_boundary(Mask(np.ones((2, 2, 2), dtype=bool)), "surface")


def test_scan_order_deterministic():
    m = np.zeros((2, 2, 2), dtype=bool)
    m[0, 0, 0] = m[1, 1, 1] = True
    b = extract_boundary(Mask(m), "inner")
    assert b.indices.tolist() == [[0, 0, 0], [1, 1, 1]]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_every_fg_voxel_reaches_inner_boundary(seed):
    # the inner boundary is exactly the zero level set of the spatial
    # geodesic map restricted to FG
    rng = np.random.default_rng(seed)
    mask = random_blob_mask(rng, dims=(6, 5, 4))
    if not mask.data.any() or mask.data.all():
        return
    b = extract_boundary(mask, "inner")
    vol = Volume(np.zeros(mask.data.shape, dtype=np.float32))
    g = geodesic_raster(vol, b, 0.0, GeoConfig(max_pass_pairs=None, convergence_tol=0.0))
    on_boundary = b.to_mask()
    assert (g.values[on_boundary] == 0.0).all()
    assert (g.values[mask.data & ~on_boundary] > 0.0).all()
