"""End-to-end toy study: soft-label regression vs hard targets on
synthetic 2D blobs.

Images are unions of one to three random filled ellipses on a 64x64
canvas, Gaussian-blurred (sigma 1.5 px) with additive uniform noise of
amplitude 0.1, clipped to [0, 1]; ground truth is the pre-blur union.
The model regresses a per-pixel signed score from the surrounding 7x7
patch through a tiny two-layer network with a tanh head.  In ``sing``
label mode the targets are the signed geodesic soft labels under the
focal L1 loss; in ``hard`` mode they are plain +/-1 under L1.  Both modes
share identical initialization and batch order for a given seed.

Everything is float64 numpy with handwritten backprop and Adam, seeded
and single-threaded, so runs are exactly reproducible.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import gaussian_filter

from .grid import Mask, Volume, _as_readonly
from .loss import LossConfig, focal_l1, l1_loss
from .metrics import MetricReport, compute_metrics
from .sing import SingParams, sing_transform, threshold_mask

LABEL_MODES = ("sing", "hard")
UNIT_SPACING = (1.0, 1.0, 1.0)


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    images: np.ndarray  # (n, size, size) float32 in [0, 1]
    masks: np.ndarray   # (n, size, size) bool
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "images", _as_readonly(self.images))
        object.__setattr__(self, "masks", _as_readonly(self.masks))

    def __len__(self) -> int:
        return self.images.shape[0]


def _ellipse(size: int, rng: np.random.Generator) -> np.ndarray:
    # geometry scales with the canvas; at the default size 64 this is
    # margin 12 with semi-axes in [5, 14]
    margin = size * (12.0 / 64.0)
    cx, cy = rng.uniform(margin, size - margin, size=2)
    a, b = rng.uniform(size * (5.0 / 64.0), size * (14.0 / 64.0), size=2)
    theta = rng.uniform(0.0, np.pi)
    yy, xx = np.mgrid[0:size, 0:size]
    u = (xx - cx) * np.cos(theta) + (yy - cy) * np.sin(theta)
    v = -(xx - cx) * np.sin(theta) + (yy - cy) * np.cos(theta)
    return (u / a) ** 2 + (v / b) ** 2 <= 1.0


def gen_synthetic(seed: int, n: int, size: int = 64) -> SyntheticDataset:
    """Deterministic synthetic dataset; every mask is non-empty."""
    if n < 1 or size < 16:
        raise ValueError(f"need n >= 1 and size >= 16, got n={n}, size={size}")
    rng = np.random.default_rng(seed)
    images = np.empty((n, size, size), dtype=np.float32)
    masks = np.empty((n, size, size), dtype=bool)
    for i in range(n):
        union = np.zeros((size, size), dtype=bool)
        for _ in range(int(rng.integers(1, 4))):
            union |= _ellipse(size, rng)
        img = gaussian_filter(union.astype(np.float64), sigma=1.5)
        img += rng.uniform(-0.1, 0.1, size=(size, size))
        images[i] = np.clip(img, 0.0, 1.0)
        masks[i] = union
    return SyntheticDataset(images, masks, seed)


@dataclass(frozen=True)
class TrainConfig:
    label_mode: str = "sing"
    epochs: int = 30
    batch_size: int = 16
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    seed: int = 0
    val_fraction: float = 0.2
    patch: int = 7
    hidden: int = 32
    sing: SingParams = field(default_factory=SingParams)
    loss: LossConfig = field(default_factory=LossConfig)

    def __post_init__(self):
        if self.label_mode not in LABEL_MODES:
            raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {self.label_mode!r}")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")
        if not (0 < self.lr and np.isfinite(self.lr)):
            raise ValueError(f"lr must be positive, got {self.lr}")
        if not (0.0 < self.val_fraction < 1.0):
            raise ValueError(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.patch % 2 != 1 or self.patch < 3:
            raise ValueError(f"patch must be odd and >= 3, got {self.patch}")
        if self.hidden < 1:
            raise ValueError(f"hidden must be >= 1, got {self.hidden}")


class PatchModel:
    """Per-pixel regressor: k*k patch -> hidden tanh layer -> logit."""

    def __init__(self, w1, b1, w2, b2, patch: int):
        self.w1 = w1
        self.b1 = b1
        self.w2 = w2
        self.b2 = b2
        self.patch = patch
        self.adam_m = {k: np.zeros_like(v) for k, v in self.params().items()}
        self.adam_v = {k: np.zeros_like(v) for k, v in self.params().items()}
        self.adam_t = 0

    @classmethod
    def init(cls, rng: np.random.Generator, patch: int = 7, hidden: int = 32) -> "PatchModel":
        fan_in = patch * patch
        w1 = rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, hidden))
        b1 = np.zeros(hidden)
        w2 = rng.normal(0.0, 1.0 / np.sqrt(hidden), size=(hidden, 1))
        b2 = np.zeros(1)
        return cls(w1, b1, w2, b2, patch)

    def params(self) -> dict[str, np.ndarray]:
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def extract_patches(self, image: np.ndarray) -> np.ndarray:
        """(h*w, patch*patch) rows of zero-padded local windows."""
        k = self.patch
        half = k // 2
        padded = np.pad(np.asarray(image, dtype=np.float64), half)
        windows = np.lib.stride_tricks.sliding_window_view(padded, (k, k))
        h, w = image.shape
        return windows.reshape(h * w, k * k)

    def forward(self, patches: np.ndarray):
        pre = patches @ self.w1 + self.b1
        hid = np.tanh(pre)
        logits = (hid @ self.w2 + self.b2)[:, 0]
        cache = (patches, hid)
        return logits, cache

    def backward(self, cache, dlogits: np.ndarray) -> dict[str, np.ndarray]:
        patches, hid = cache
        dl = dlogits[:, None]
        dw2 = hid.T @ dl
        db2 = dl.sum(axis=0)
        dhid = dl @ self.w2.T
        dpre = dhid * (1.0 - hid * hid)
        dw1 = patches.T @ dpre
        db1 = dpre.sum(axis=0)
        return {"w1": dw1, "b1": db1, "w2": dw2, "b2": db2}

    def adam_step(self, grads: dict[str, np.ndarray], lr: float, beta1: float, beta2: float, eps: float = 1e-8):
        self.adam_t += 1
        t = self.adam_t
        for key, p in self.params().items():
            g = grads[key]
            self.adam_m[key] = beta1 * self.adam_m[key] + (1.0 - beta1) * g
            self.adam_v[key] = beta2 * self.adam_v[key] + (1.0 - beta2) * g * g
            mhat = self.adam_m[key] / (1.0 - beta1 ** t)
            vhat = self.adam_v[key] / (1.0 - beta2 ** t)
            p -= lr * mhat / (np.sqrt(vhat) + eps)

    def predict_logits(self, image: np.ndarray) -> np.ndarray:
        logits, _ = self.forward(self.extract_patches(image))
        return logits.reshape(image.shape)

    def predict_mask(self, image: np.ndarray) -> Mask:
        z = np.tanh(self.predict_logits(image))
        return threshold_mask(z[None], UNIT_SPACING)


@dataclass(frozen=True, eq=False)
class TrainResult:
    model: PatchModel
    history: list[tuple[int, float, float]]  # (epoch, train_loss, val_dice)
    train_indices: np.ndarray
    val_indices: np.ndarray
    config: TrainConfig


def make_targets(dataset: SyntheticDataset, indices, config: TrainConfig) -> dict[int, np.ndarray]:
    """Per-image regression targets for the configured label mode."""
    targets = {}
    for i in indices:
        i = int(i)
        if config.label_mode == "sing":
            vol = Volume(dataset.images[i][None, None], UNIT_SPACING)
            mask = Mask(dataset.masks[i][None], UNIT_SPACING)
            targets[i] = sing_transform(vol, mask, config.sing).values[0]
        else:
            targets[i] = np.where(dataset.masks[i], 1.0, -1.0)
    return targets


def _image_loss(target: np.ndarray, z: np.ndarray, config: TrainConfig):
    if config.label_mode == "sing":
        return focal_l1(target, z, config.loss)
    return l1_loss(target, z)


def split_indices(n: int, config: TrainConfig) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(3)[1])
    perm = rng.permutation(n)
    n_val = max(1, int(round(n * config.val_fraction)))
    if n_val >= n:
        raise ValueError(f"dataset of {n} images leaves no training split")
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def _val_dice(model: PatchModel, dataset: SyntheticDataset, val_idx: np.ndarray) -> float:
    from .metrics import dice as dice_fn

    scores = []
    for i in val_idx:
        pred = model.predict_mask(dataset.images[int(i)])
        ref = Mask(dataset.masks[int(i)][None], UNIT_SPACING)
        scores.append(dice_fn(pred, ref))
    return float(np.mean(scores))


def train(dataset: SyntheticDataset, config: TrainConfig = TrainConfig()) -> TrainResult:
    """Run the toy study; deterministic for a given config seed."""
    init_ss, _, shuffle_ss = np.random.SeedSequence(config.seed).spawn(3)
    model = PatchModel.init(np.random.default_rng(init_ss), config.patch, config.hidden)
    train_idx, val_idx = split_indices(len(dataset), config)
    targets = make_targets(dataset, train_idx, config)
    shuffle_rng = np.random.default_rng(shuffle_ss)

    history: list[tuple[int, float, float]] = []
    for epoch in range(1, config.epochs + 1):
        order = train_idx[shuffle_rng.permutation(len(train_idx))]
        batch_losses = []
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            patches = np.concatenate([model.extract_patches(dataset.images[int(i)]) for i in batch])
            logits, cache = model.forward(patches)
            z = np.tanh(logits)
            if not np.all(np.isfinite(z)):
                raise RuntimeError(
                    f"training diverged: non-finite predictions at epoch {epoch} (mode={config.label_mode})"
                )
            per_pixel = dataset.images.shape[1] * dataset.images.shape[2]
            dlogits = np.empty_like(logits)
            losses = []
            for j, i in enumerate(batch):
                sl = slice(j * per_pixel, (j + 1) * per_pixel)
                report = _image_loss(targets[int(i)].ravel(), z[sl], config)
                losses.append(report.loss)
                dlogits[sl] = report.grad_wrt_logit / len(batch)
            batch_loss = float(np.mean(losses))
            if not np.isfinite(batch_loss):
                raise RuntimeError(
                    f"training diverged: non-finite loss at epoch {epoch} (mode={config.label_mode})"
                )
            grads = model.backward(cache, dlogits)
            model.adam_step(grads, config.lr, config.beta1, config.beta2)
            batch_losses.append(batch_loss)
        if not all(np.isfinite(p).all() for p in model.params().values()):
            raise RuntimeError(f"training diverged: non-finite parameters at epoch {epoch}")
        history.append((epoch, float(np.mean(batch_losses)), _val_dice(model, dataset, val_idx)))
    return TrainResult(model, history, train_idx, val_idx, config)


@dataclass(frozen=True)
class EvalAggregate:
    count: int
    dice_mean: float
    dice_se: float
    iou_mean: float
    iou_se: float
    hd95_mean: float
    hd95_se: float


def _mean_se(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    se = float(arr.std(ddof=1) / np.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return float(arr.mean()), se


def evaluate(model: PatchModel, dataset: SyntheticDataset, indices=None) -> tuple[list[MetricReport], EvalAggregate]:
    """Per-image metrics plus mean +/- standard-error aggregate."""
    if indices is None:
        indices = np.arange(len(dataset))
    reports = []
    for i in indices:
        pred = model.predict_mask(dataset.images[int(i)])
        ref = Mask(dataset.masks[int(i)][None], UNIT_SPACING)
        reports.append(compute_metrics(pred, ref))
    agg = EvalAggregate(
        len(reports),
        *_mean_se([r.dice for r in reports]),
        *_mean_se([r.iou for r in reports]),
        *_mean_se([r.hd95 for r in reports]),
    )
    return reports, agg


def write_history_csv(path: str | os.PathLike, history: list[tuple[int, float, float]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["epoch", "train_loss", "val_dice"])
        for epoch, loss, vdice in history:
            writer.writerow([epoch, f"{loss:.6f}", f"{vdice:.6f}"])


def write_eval_csv(path: str | os.PathLike, indices, reports: list[MetricReport]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["index", "dice", "iou", "hd95_mm"])
        for i, r in zip(indices, reports):
            writer.writerow([int(i), f"{r.dice:.6f}", f"{r.iou:.6f}", f"{r.hd95:.6f}"])
