"""Command line front end.

Subcommands: ``transform`` (masks -> signed soft labels), ``metrics``
(Dice/IoU/HD95 as CSV), ``loss-curve`` (single-voxel loss samples),
``train-demo`` (the synthetic end-to-end study) and ``slice`` (PGM
export of one plane).

Exit codes: 0 success, 1 usage error, 2 data error (unreadable input,
dims mismatch, malformed file), 3 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys

import numpy as np

from .grid import VALID_CONNECTIVITIES, Mask, Volume, normalize_minmax
from .io import (
    NiftiFormatError,
    SvolFormatError,
    load_volume,
    sniff_format,
    write_svol,
)
from .loss import LossConfig, focal_l1
from .geodesic import GeoConfig
from .metrics import compute_metrics
from .sing import SingParams, sing_transform
from .trainer import (
    TrainConfig,
    evaluate,
    gen_synthetic,
    train,
    write_eval_csv,
    write_history_csv,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve 2 for data errors
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="singr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="signed geodesic soft labels from image + mask")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--connectivity", type=int, default=26)
    p.add_argument("--boundary", choices=("inner", "outer", "both"), default="inner")
    p.add_argument("--passes", default="4", help="pass-pair budget, or 'auto' to run to convergence")
    p.add_argument("--no-normalize", action="store_true", help="skip per-channel min-max rescale")
    p.add_argument("--format", choices=("svol", "nifti"), default=None, help="override extension sniffing")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers in directory mode")

    p = sub.add_parser("metrics", help="Dice/IoU/HD95 between two masks, CSV on stdout")
    p.add_argument("--pred", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--format", choices=("svol", "nifti"), default=None)

    p = sub.add_parser("loss-curve", help="single-voxel loss samples across predictions")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--s", dest="target", type=float, default=1.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train-demo", help="synthetic soft-vs-hard label study")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n", type=int, default=250)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--label-mode", choices=("sing", "hard"), default="sing")
    p.add_argument("--outdir", required=True)

    p = sub.add_parser("slice", help="export one plane as a binary PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--axis", choices=("x", "y", "z"), default="z")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--channel", type=int, default=0)
    p.add_argument("--format", choices=("svol", "nifti"), default=None)
    return parser


def _parse_passes(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        n = int(text)
    except ValueError:
        raise _UsageError(f"--passes must be a positive integer or 'auto', got {text!r}")
    if n < 1:
        raise _UsageError(f"--passes must be >= 1, got {n}")
    return n


def _sing_params(args) -> SingParams:
    if not 0.0 <= args.lam <= 1.0:
        raise _UsageError(f"--lambda must be in [0, 1], got {args.lam}")
    if not 0.0 <= args.delta < 1.0:
        raise _UsageError(f"--delta must be in [0, 1), got {args.delta}")
    if args.connectivity not in VALID_CONNECTIVITIES:
        raise _UsageError(f"--connectivity must be one of {VALID_CONNECTIVITIES}, got {args.connectivity}")
    geo = GeoConfig(connectivity=args.connectivity, max_pass_pairs=_parse_passes(args.passes))
    return SingParams(lam=args.lam, delta=args.delta, side=args.boundary, geo=geo)


def _load_mask_volume(path: str, fmt: str | None) -> Volume:
    return load_volume(path, fmt)


def _out_path(out: str, channel: int, channels: int) -> str:
    if channels == 1:
        return out
    root, ext = os.path.splitext(out)
    return f"{root}_c{channel}{ext}"


def _transform_one(image_path: str, mask_path: str, out_path: str, params: SingParams,
                   normalize: bool, fmt: str | None) -> None:
    image = load_volume(image_path, fmt)
    if normalize:
        image = normalize_minmax(image)
    mask_vol = _load_mask_volume(mask_path, fmt)
    if mask_vol.dims != image.dims:
        raise ValueError(f"image dims {image.dims} != mask dims {mask_vol.dims}")
    for c in range(mask_vol.channels):
        smap = sing_transform(image, Mask.from_volume(mask_vol, c), params)
        write_svol(smap, _out_path(out_path, c, mask_vol.channels))


_STRIP_EXTS = (".nii.gz", ".nii", ".svol")


def _stem(name: str) -> str:
    low = name.lower()
    for ext in _STRIP_EXTS:
        if low.endswith(ext):
            return name[: -len(ext)]
    return name


def _pair_directory(image_dir: str, mask_dir: str) -> list[tuple[str, str, str]]:
    masks = {}
    for name in os.listdir(mask_dir):
        if sniff_format(name):
            masks[_stem(name)] = os.path.join(mask_dir, name)
    pairs = []
    for name in sorted(os.listdir(image_dir)):
        if not sniff_format(name):
            continue
        stem = _stem(name)
        if stem not in masks:
            raise ValueError(f"no mask found for image {name!r} in {mask_dir}")
        pairs.append((os.path.join(image_dir, name), masks[stem], stem))
    if not pairs:
        raise ValueError(f"no volume files found in {image_dir}")
    return pairs


def _cmd_transform(args) -> int:
    params = _sing_params(args)
    if args.jobs < 1:
        raise _UsageError(f"--jobs must be >= 1, got {args.jobs}")
    normalize = not args.no_normalize
    if os.path.isdir(args.image):
        if not os.path.isdir(args.mask):
            raise ValueError(f"--image is a directory but --mask {args.mask!r} is not")
        os.makedirs(args.out, exist_ok=True)
        pairs = _pair_directory(args.image, args.mask)
        tasks = [
            (img, msk, os.path.join(args.out, f"{stem}.svol"), params, normalize, args.format)
            for img, msk, stem in pairs
        ]
        if args.jobs == 1:
            for task in tasks:
                _transform_one(*task)
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                futures = [pool.submit(_transform_one, *task) for task in tasks]
                for future in futures:
                    future.result()
    else:
        _transform_one(args.image, args.mask, args.out, params, normalize, args.format)
    return 0


def _load_cli_mask(path: str, fmt: str | None) -> Mask:
    vol = load_volume(path, fmt)
    if vol.channels != 1:
        raise ValueError(f"{path} has {vol.channels} channels; metrics expect single-channel masks")
    return Mask.from_volume(vol)


def _cmd_metrics(args) -> int:
    pred = _load_cli_mask(args.pred, args.format)
    ref = _load_cli_mask(args.ref, args.format)
    report = compute_metrics(pred, ref)
    print("dice,iou,hd95_mm")
    print(f"{report.dice:.6f},{report.iou:.6f},{report.hd95:.6f}")
    return 0


def _cmd_loss_curve(args) -> int:
    if not -1.0 <= args.target <= 1.0:
        raise _UsageError(f"--s must be in [-1, 1], got {args.target}")
    if args.gamma <= 0:
        raise _UsageError(f"--gamma must be > 0, got {args.gamma}")
    if args.epsilon < 0:
        raise _UsageError(f"--epsilon must be >= 0, got {args.epsilon}")
    config = LossConfig(gamma=args.gamma, epsilon=args.epsilon)
    s = np.array([args.target])
    with open(args.out, "w") as f:
        f.write("z,focal_l1,l1\n")
        for k in range(201):
            z = (k - 100) / 100.0
            focal = focal_l1(s, np.array([z]), config).loss
            f.write(f"{z:.2f},{focal!r},{abs(args.target - z)!r}\n")
    return 0


def _cmd_train_demo(args) -> int:
    if args.n < 5:
        raise _UsageError(f"--n must be >= 5, got {args.n}")
    if args.epochs < 0:
        raise _UsageError(f"--epochs must be >= 0, got {args.epochs}")
    os.makedirs(args.outdir, exist_ok=True)
    dataset = gen_synthetic(args.seed, args.n)
    config = TrainConfig(label_mode=args.label_mode, epochs=args.epochs, seed=args.seed)
    result = train(dataset, config)
    reports, agg = evaluate(result.model, dataset, result.val_indices)
    write_history_csv(os.path.join(args.outdir, "history.csv"), result.history)
    write_eval_csv(os.path.join(args.outdir, "eval.csv"), result.val_indices, reports)
    print(
        f"label_mode={args.label_mode} val_images={agg.count} "
        f"dice={agg.dice_mean:.4f}+/-{agg.dice_se:.4f} "
        f"iou={agg.iou_mean:.4f}+/-{agg.iou_se:.4f} "
        f"hd95={agg.hd95_mean:.4f}+/-{agg.hd95_se:.4f}"
    )
    return 0


def _cmd_slice(args) -> int:
    vol = load_volume(args.input, args.format)
    nx, ny, nz = vol.dims
    if not 0 <= args.channel < vol.channels:
        raise _UsageError(f"--channel {args.channel} out of range for {vol.channels} channels")
    limits = {"x": nx, "y": ny, "z": nz}
    if not 0 <= args.index < limits[args.axis]:
        raise _UsageError(f"--index {args.index} out of range for axis {args.axis} (size {limits[args.axis]})")
    data = vol.data[args.channel]
    if args.axis == "z":
        plane = data[args.index]
    elif args.axis == "y":
        plane = data[:, args.index]
    else:
        plane = data[:, :, args.index]
    lo, hi = float(plane.min()), float(plane.max())
    if hi > lo:
        scaled = np.round((plane.astype(np.float64) - lo) / (hi - lo) * 255.0)
    else:
        scaled = np.zeros_like(plane, dtype=np.float64)
    payload = scaled.astype(np.uint8)
    h, w = payload.shape
    with open(args.out, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode())
        f.write(payload.tobytes())
    return 0


_HANDLERS = {
    "transform": _cmd_transform,
    "metrics": _cmd_metrics,
    "loss-curve": _cmd_loss_curve,
    "train-demo": _cmd_train_demo,
    "slice": _cmd_slice,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (SvolFormatError, NiftiFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort runtime failures
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
