#!/usr/bin/env python3
"""Export cross-implementation parity fixtures for the frontend bindings.

Writes frontend/test/fixtures/parity.json: focal-loss cases with float32
inputs and the exact float64 report the reference implementation produces,
plus soft-label transform cases with the expected float32 output buffer,
beta/tau scalars and degenerate tags.  Buffers are base64 little-endian;
scalars are plain JSON numbers (both sides round-trip float64 exactly).

Loss cases stick to gamma in {1, 2}: those exponents are evaluated with
plain multiplication, so bit-exact parity does not depend on libm pow.

Usage:
    python scripts/export_parity_fixtures.py [--out frontend/test/fixtures/parity.json]
"""

import argparse
import base64
import json
import os
import sys
import warnings

import numpy as np

from singr import GeoConfig, Mask, SingParams, Volume, focal_l1, sing_transform

# the batch CLI's transform defaults; the bindings shell out with only
# --lambda/--delta/--no-normalize, so everything else must match these
CLI_GEO = GeoConfig(connectivity=26, max_pass_pairs=4, convergence_tol=1e-6)


def b64(arr: np.ndarray, dtype: str) -> str:
    return base64.b64encode(np.ascontiguousarray(arr).astype(dtype).tobytes()).decode("ascii")


def focal_case(name: str, s32: np.ndarray, z32: np.ndarray, gamma: float, epsilon: float) -> dict:
    assert s32.dtype == np.float32 and z32.dtype == np.float32
    from singr import LossConfig

    report = focal_l1(s32, z32, LossConfig(gamma=gamma, epsilon=epsilon))
    return {
        "name": name,
        "gamma": gamma,
        "epsilon": epsilon,
        "n": int(s32.size),
        "s_f32": b64(s32, "<f4"),
        "z_f32": b64(z32, "<f4"),
        "loss": report.loss,
        "weights_f64": b64(report.weights, "<f8"),
        "grad_z_f64": b64(report.grad_wrt_z, "<f8"),
        "grad_logit_f64": b64(report.grad_wrt_logit, "<f8"),
        "grad_logit_f32": b64(report.grad_wrt_logit, "<f4"),
    }


def make_focal_cases() -> list[dict]:
    rng = np.random.default_rng(20240817)
    cases = []

    one = np.array([1.0], dtype=np.float32)
    cases.append(focal_case("point_opposite", one, np.array([-1.0], np.float32), 1.0, 0.0))
    cases.append(focal_case("point_easy", one, np.array([0.5], np.float32), 1.0, 0.0))
    cases.append(focal_case("point_half", np.array([0.5], np.float32), np.array([0.25], np.float32), 1.0, 0.0))

    same = rng.uniform(-1.0, 1.0, size=16).astype(np.float32)
    cases.append(focal_case("exact_match", same, same.copy(), 1.0, 0.0))

    s = rng.uniform(-1.0, 1.0, size=64).astype(np.float32)
    z = rng.uniform(-1.0, 1.0, size=64).astype(np.float32)
    cases.append(focal_case("random_64_eps", s, z, 1.0, 1e-3))

    s = rng.uniform(-1.0, 1.0, size=257).astype(np.float32)
    z = rng.uniform(-1.0, 1.0, size=257).astype(np.float32)
    cases.append(focal_case("random_257_gamma2", s, z, 2.0, 0.0))

    # ties, zeros and sign flips in one buffer: d == 0 lanes, a (0, z)
    # easy lane, opposite-sign lanes and the zero/zero pair
    s = np.array([0.0, 0.5, -0.5, 1.0, 0.25, -0.75, 0.0, 0.125], np.float32)
    z = np.array([0.0, 0.5, 0.5, -0.25, 0.25, -0.25, 0.625, -0.125], np.float32)
    cases.append(focal_case("mixed_edges", s, z, 1.0, 1e-3))

    odd_s = rng.uniform(-1.0, 1.0, size=33).astype(np.float32)
    odd_z = rng.uniform(-1.0, 1.0, size=33).astype(np.float32)
    cases.append(focal_case("random_33_gamma2_eps", odd_s, odd_z, 2.0, 1e-3))
    return cases


def sing_case(name: str, image: Volume, mask_arr: np.ndarray, lam: float, delta: float) -> dict:
    mask = Mask(mask_arr, image.spacing)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sm = sing_transform(image, mask, SingParams(lam=lam, delta=delta, side="inner", geo=CLI_GEO))
    warning_bits = {None: 0, "empty_mask": 1, "full_mask": 2}[sm.degenerate]
    nx, ny, nz = image.dims
    return {
        "name": name,
        "dims": [nx, ny, nz],
        "channels": image.channels,
        "spacing": list(image.spacing),
        "lam": lam,
        "delta": delta,
        "image_f32": b64(image.data, "<f4"),
        "mask_u8": b64(mask_arr.astype(np.uint8), "u1"),
        "values_f32": b64(sm.values, "<f4"),
        "beta": sm.beta,
        "tau": sm.tau,
        "degenerate": sm.degenerate,
        "warnings": warning_bits,
    }


def make_sing_cases() -> list[dict]:
    rng = np.random.default_rng(20240818)
    cases = []

    line_img = Volume(np.zeros((1, 1, 7), np.float32))
    line = np.zeros((1, 1, 7), bool)
    line[0, 0, 2:5] = True
    cases.append(sing_case("line_1x1x7", line_img, line, 0.0, 0.5))

    # 2-deep slab: every foreground voxel sits on the boundary, so the
    # band collapses to the seeds and tau stays 0 without a degenerate tag
    img = Volume(rng.uniform(0.0, 1.0, size=(4, 5, 6)).astype(np.float32), spacing=(1.5, 1.0, 0.75))
    slab = np.zeros((4, 5, 6), bool)
    slab[1:3, 1:4, 2:5] = True
    slab[2, 3, 4] = False
    cases.append(sing_case("slab_tau0_aniso", img, slab, 0.5, 0.25))

    img = Volume(rng.uniform(0.0, 1.0, size=(6, 6, 7)).astype(np.float32), spacing=(0.5, 1.25, 2.0))
    blob = np.zeros((6, 6, 7), bool)
    blob[1:5, 1:5, 1:6] = True
    blob[4, 4, 5] = False
    cases.append(sing_case("blob_aniso", img, blob, 0.5, 0.25))

    img2 = Volume(rng.uniform(0.0, 1.0, size=(2, 5, 5, 5)).astype(np.float32), spacing=(1.0, 1.0, 2.0))
    ball = np.zeros((5, 5, 5), bool)
    zz, yy, xx = np.mgrid[0:5, 0:5, 0:5]
    ball[(zz - 2) ** 2 + (yy - 2) ** 2 + (xx - 2) ** 2 <= 4] = True
    cases.append(sing_case("ball_2ch", img2, ball, 1.0, 0.0))

    empty_img = Volume(rng.uniform(0.0, 1.0, size=(2, 4, 3)).astype(np.float32))
    cases.append(sing_case("degenerate_empty", empty_img, np.zeros((2, 4, 3), bool), 0.5, 0.5))

    full_img = Volume(rng.uniform(0.0, 1.0, size=(3, 3, 3)).astype(np.float32))
    cases.append(sing_case("degenerate_full", full_img, np.ones((3, 3, 3), bool), 0.5, 0.5))
    return cases


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default_out = os.path.join(os.path.dirname(__file__), "..", "frontend", "test", "fixtures", "parity.json")
    parser.add_argument("--out", default=os.path.normpath(default_out))
    args = parser.parse_args(argv)

    doc = {"focal": make_focal_cases(), "sing": make_sing_cases()}
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")
    print(f"wrote {len(doc['focal'])} focal + {len(doc['sing'])} sing cases to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
