/**
 * Status-code boundary. Both entry points are reentrant, never throw,
 * write only into caller-provided buffers, and retain nothing after the
 * call returns.
 *
 * The soft-label transform is reached by shelling out to the toolkit CLI
 * over temp files in its binary volume format; the loss runs in-process
 * with bit-identical float64 arithmetic. Set the `SINGR_CLI` environment
 * variable to override the CLI command (default `singr`).
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import {
  STATUS_DATA_FORMAT,
  STATUS_DIMS_MISMATCH,
  STATUS_INVALID_ARGUMENT,
  STATUS_OK,
  STATUS_RUNTIME,
  DataFormatError,
} from "./errors.js";
import { focalL1Report, upcast } from "./focal.js";
import { decodeSvol, encodeSvol, maskAsVolume, parseMeta } from "./svol.js";
import type { BufferView } from "./types.js";
import { sameDims, viewProblem } from "./types.js";

/** Version-1 entry-point name table. */
export const SINGR_FFI_V1 = {
  sing_transform: {
    symbol: "singr_ffi_v1_sing_transform",
    args: ["image: f32 view", "mask: u8 view", "lambda: f64", "delta: f64", "out: f32 view", "beta_tau: f64[2]", "warnings: u32[1]"],
    returns: "i32 status",
  },
  focal_l1: {
    symbol: "singr_ffi_v1_focal_l1",
    args: ["targets: f32 view", "predictions: f32 view", "gamma: f64", "epsilon: f64", "grad_out: f32 view"],
    returns: "[i32 status, f64 loss]",
  },
} as const;

/** Warning bits reported through the flags out-slot. */
export const WARN_EMPTY_MASK = 1;
export const WARN_FULL_MASK = 2;

function cliCommand(): string[] {
  const override = process.env.SINGR_CLI?.trim();
  return override ? override.split(/\s+/) : ["singr"];
}

function exitCodeToStatus(exitCode: number): number {
  // the CLI's contract: 1 usage error, 2 I/O or format error, 3 internal
  switch (exitCode) {
    case 0:
      return STATUS_OK;
    case 1:
      return STATUS_INVALID_ARGUMENT;
    case 2:
      return STATUS_DATA_FORMAT;
    default:
      return STATUS_RUNTIME;
  }
}

function degenerateBits(tag: string | null): number {
  if (tag === "empty_mask") return WARN_EMPTY_MASK;
  if (tag === "full_mask") return WARN_FULL_MASK;
  return 0;
}

/**
 * Fills `out` with the signed normalized geodesic soft labels of `mask`
 * over `image`, writes beta and tau into `scalars[0..1]` and degenerate
 * warning bits into `flags[0]`. Returns a status code.
 */
export function ffiSingTransform(
  image: BufferView<Float32Array>,
  mask: BufferView<Uint8Array>,
  lambda: number,
  delta: number,
  out: BufferView<Float32Array>,
  scalars: Float64Array,
  flags: Uint32Array,
): number {
  if (viewProblem(image, "image") || viewProblem(mask, "mask") || viewProblem(out, "out")) {
    return STATUS_INVALID_ARGUMENT;
  }
  if (mask.channels !== 1 || out.channels !== 1) return STATUS_INVALID_ARGUMENT;
  if (!Number.isFinite(lambda) || lambda < 0 || lambda > 1) return STATUS_INVALID_ARGUMENT;
  if (!Number.isFinite(delta) || delta < 0 || delta >= 1) return STATUS_INVALID_ARGUMENT;
  if (scalars.length < 2 || flags.length < 1) return STATUS_INVALID_ARGUMENT;
  if (!sameDims(image.dims, mask.dims) || !sameDims(image.dims, out.dims)) {
    return STATUS_DIMS_MISMATCH;
  }

  let workDir: string | null = null;
  try {
    workDir = mkdtempSync(join(tmpdir(), "singr-ffi-"));
    const imagePath = join(workDir, "image.svol");
    const maskPath = join(workDir, "mask.svol");
    const outPath = join(workDir, "out.svol");
    writeFileSync(imagePath, encodeSvol(image));
    writeFileSync(maskPath, encodeSvol(maskAsVolume(mask)));

    const [cmd, ...prefix] = cliCommand();
    const result = spawnSync(cmd, [
      ...prefix,
      "transform",
      "--image", imagePath,
      "--mask", maskPath,
      "--out", outPath,
      "--lambda", String(lambda),
      "--delta", String(delta),
      "--no-normalize",
    ]);
    if (result.error || result.status === null) return STATUS_RUNTIME;
    if (result.status !== 0) return exitCodeToStatus(result.status);

    const decoded = decodeSvol(readFileSync(outPath));
    if (decoded.channels !== 1 || !sameDims(decoded.dims, out.dims)) return STATUS_DATA_FORMAT;
    out.data.set(decoded.data);

    const meta = parseMeta(readFileSync(`${outPath}.meta`, "utf8"));
    scalars[0] = meta.beta;
    scalars[1] = meta.tau;
    flags[0] = degenerateBits(meta.degenerate);
    return STATUS_OK;
  } catch (err) {
    return err instanceof DataFormatError ? STATUS_DATA_FORMAT : STATUS_RUNTIME;
  } finally {
    if (workDir !== null) rmSync(workDir, { recursive: true, force: true });
  }
}

/**
 * Computes the loss over two soft-label buffers and writes the gradient
 * with respect to the pre-tanh logits into `gradOut` (downcast to f32).
 * Returns `[status, loss]`; loss is NaN unless status is 0.
 */
export function ffiFocalL1(
  targets: BufferView<Float32Array>,
  predictions: BufferView<Float32Array>,
  gamma: number,
  epsilon: number,
  gradOut: BufferView<Float32Array>,
): [number, number] {
  if (viewProblem(targets, "targets") || viewProblem(predictions, "predictions") || viewProblem(gradOut, "grad_out")) {
    return [STATUS_INVALID_ARGUMENT, NaN];
  }
  if (!Number.isFinite(gamma) || gamma <= 0) return [STATUS_INVALID_ARGUMENT, NaN];
  if (!Number.isFinite(epsilon) || epsilon < 0) return [STATUS_INVALID_ARGUMENT, NaN];
  if (
    !sameDims(targets.dims, predictions.dims) ||
    targets.channels !== predictions.channels ||
    !sameDims(targets.dims, gradOut.dims) ||
    targets.channels !== gradOut.channels
  ) {
    return [STATUS_DIMS_MISMATCH, NaN];
  }
  for (const view of [targets, predictions]) {
    for (let i = 0; i < view.data.length; i++) {
      const v = view.data[i];
      if (!Number.isFinite(v) || Math.abs(v) > 1.0) return [STATUS_INVALID_ARGUMENT, NaN];
    }
  }
  try {
    const report = focalL1Report(upcast(targets.data), upcast(predictions.data), gamma, epsilon);
    gradOut.data.set(report.gradWrtLogit);
    return [STATUS_OK, report.loss];
  } catch {
    return [STATUS_RUNTIME, NaN];
  }
}
