import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from singr import (
    DegenerateMaskWarning,
    GeoConfig,
    Mask,
    SingParams,
    Volume,
    extract_boundary,
    geodesic_dijkstra,
    sing_transform,
    threshold_mask,
)

from conftest import random_blob_mask, random_volume

CONVERGED = GeoConfig(max_pass_pairs=None, convergence_tol=0.0)


def line_fixture():
    img = Volume(np.zeros((7, 1, 1), dtype=np.float32))
    mask = Mask(np.array([0, 0, 1, 1, 1, 0, 0], dtype=np.uint8).reshape(7, 1, 1))
    return img, mask


def reference_sing(img, mask, params):
    """Independent reconstruction on top of the exact heap solver."""
    seeds = extract_boundary(mask, params.side)
    g0 = geodesic_dijkstra(img, seeds, 0.0, params.geo.connectivity).values
    gl = geodesic_dijkstra(img, seeds, params.lam, params.geo.connectivity).values
    m = mask.data
    beta = g0[m].max()
    band = g0 <= beta
    tau = gl[band].max()
    sign = np.where(m, 1.0, -1.0)
    mag = params.delta + (1 - params.delta) * (gl / tau) if tau > 0 else np.full_like(g0, params.delta)
    return np.where(band, sign * np.minimum(mag, 1.0), -1.0), beta, tau


def test_line_fixture_exact():
    img, mask = line_fixture()
    sm = sing_transform(img, mask, SingParams(lam=0.0, delta=0.5))
    assert sm.values.ravel().tolist() == [-1.0, -1.0, 0.5, 1.0, 0.5, -1.0, -1.0]
    assert sm.beta == 1.0
    assert sm.tau == 1.0


def test_line_fixture_matches_reference():
    img, mask = line_fixture()
    params = SingParams(lam=0.0, delta=0.5, geo=CONVERGED)
    sm = sing_transform(img, mask, params)
    ref, beta, tau = reference_sing(img, mask, params)
    assert np.array_equal(sm.values, ref)
    assert sm.beta == beta and sm.tau == tau


def test_random_case_matches_reference(rng):
    vol = random_volume(rng, (7, 6, 5), anisotropic=True)
    mask = Mask(rng.random((5, 6, 7)) > 0.5, vol.spacing)
    params = SingParams(lam=0.5, delta=0.3, geo=CONVERGED)
    sm = sing_transform(vol, mask, params)
    ref, beta, tau = reference_sing(vol, mask, params)
    np.testing.assert_allclose(sm.values, ref, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose([sm.beta, sm.tau], [beta, tau], rtol=1e-12)


def check_invariants(sm, mask, delta):
    values = sm.values
    m = mask.data
    assert values.min() >= -1.0 and values.max() <= 1.0
    assert (values[m] >= delta).all() and (values[m] <= 1.0).all()
    bg = values[~m]
    if bg.size:
        assert (bg <= -delta).all() and (bg >= -1.0).all()
    # separation margin between any FG/BG pair
    if m.any() and (~m).any():
        assert values[m].min() - values[~m].max() >= 2 * delta - 1e-12
    # threshold round trip
    if delta > 0:
        rt = threshold_mask(sm)
        assert np.array_equal(rt.data, m)


def test_invariants_random_masks(rng):
    for _ in range(10):
        vol = random_volume(rng)
        mask = random_blob_mask(rng, dims=vol.dims, spacing=vol.spacing)
        delta = float(rng.uniform(0.05, 0.9))
        lam = float(rng.choice([0.0, 0.5, 1.0]))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateMaskWarning)
            sm = sing_transform(vol, mask, SingParams(lam=lam, delta=delta))
        check_invariants(sm, mask, delta)


def test_max_magnitude_is_one_when_tau_positive(rng):
    vol = random_volume(rng, (8, 7, 6))
    mask = Mask(np.pad(np.ones((3, 3, 3), dtype=bool), ((1, 2), (2, 2), (2, 3))), vol.spacing)
    sm = sing_transform(vol, mask, SingParams(lam=0.5, delta=0.4))
    assert sm.tau > 0
    assert np.abs(sm.values).max() == 1.0


def test_outside_band_is_exactly_minus_one():
    img = Volume(np.zeros((9, 1, 1), dtype=np.float32))
    mask = Mask(np.array([0, 0, 0, 0, 1, 0, 0, 0, 0], dtype=np.uint8).reshape(9, 1, 1))
    sm = sing_transform(img, mask, SingParams(lam=0.0, delta=0.5))
    # single FG voxel: beta = 0, band = boundary voxel only
    assert sm.beta == 0.0 and sm.tau == 0.0
    expected = np.full(9, -1.0)
    expected[4] = 0.5
    assert sm.values.ravel().tolist() == expected.tolist()


def test_empty_mask_warns_constant_minus_one(rng):
    vol = random_volume(rng, (4, 4, 4))
    with pytest.warns(DegenerateMaskWarning):
        sm = sing_transform(vol, Mask(np.zeros((4, 4, 4), dtype=bool), vol.spacing))
    assert (sm.values == -1.0).all()
    assert sm.degenerate == "empty_mask"
    assert threshold_mask(sm).fg_count == 0


def test_full_mask_warns_constant_plus_one(rng):
    vol = random_volume(rng, (4, 4, 4))
    with pytest.warns(DegenerateMaskWarning):
        sm = sing_transform(vol, Mask(np.ones((4, 4, 4), dtype=bool), vol.spacing))
    assert (sm.values == 1.0).all()
    assert sm.degenerate == "full_mask"
    assert threshold_mask(sm).fg_count == 64


def test_tau_zero_constant_image_pure_intensity(rng):
    vol = Volume(np.full((5, 5, 5), 3.0, dtype=np.float32))
    mask = Mask(np.pad(np.ones((2, 2, 2), dtype=bool), ((1, 2), (1, 2), (1, 2))))
    sm = sing_transform(vol, mask, SingParams(lam=1.0, delta=0.5))
    assert sm.tau == 0.0
    inside = np.unique(sm.values[mask.data])
    assert inside.tolist() == [0.5]


def test_band_independent_of_lam(rng):
    vol = random_volume(rng, (7, 6, 5))
    mask = random_blob_mask(rng, dims=vol.dims)
    if not mask.data.any() or mask.data.all():
        pytest.skip("degenerate draw")
    seeds = extract_boundary(mask)
    g0 = geodesic_dijkstra(vol, seeds, 0.0).values
    band = g0 <= g0[mask.data].max()
    for lam in (0.0, 1.0):
        sm = sing_transform(vol, mask, SingParams(lam=lam, delta=0.5, geo=CONVERGED))
        assert (sm.values[~band] == -1.0).all()
        assert (np.abs(sm.values[band]) >= 0.5).all()


def test_dims_mismatch_names_both_shapes(rng):
    vol = random_volume(rng, (4, 4, 4))
    with pytest.raises(ValueError, match=r"\(4, 4, 4\).*\(3, 4, 4\)"):
        sing_transform(vol, Mask(np.zeros((4, 4, 3), dtype=bool)))


def test_multichannel_image_supported(rng):
    vol = random_volume(rng, (5, 5, 5), channels=3)
    mask = random_blob_mask(rng, dims=(5, 5, 5))
    if not mask.data.any() or mask.data.all():
        pytest.skip("degenerate draw")
    sm = sing_transform(vol, mask, SingParams(lam=0.5))
    check_invariants(sm, mask, 0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        SingParams(lam=1.5)
    with pytest.raises(ValueError):
        SingParams(delta=1.0)
    with pytest.raises(ValueError):
        SingParams(side="elsewhere")


def test_threshold_mask_on_array():
    arr = np.array([[-0.2, 0.0], [0.1, 1.0]]).reshape(1, 2, 2)
    m = threshold_mask(arr)
    assert m.data.ravel().tolist() == [False, False, True, True]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_roundtrip_property(seed):
    rng = np.random.default_rng(seed)
    vol = random_volume(rng, (6, 5, 4))
    mask = random_blob_mask(rng, dims=vol.dims)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateMaskWarning)
        sm = sing_transform(vol, mask, SingParams(lam=0.5, delta=0.25))
    assert np.array_equal(threshold_mask(sm).data, mask.data)
