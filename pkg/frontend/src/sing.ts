/**
 * Idiomatic wrapper over the status-code boundary: validates inputs,
 * allocates outputs, and raises typed exceptions instead of returning
 * codes.
 */

import { checkStatus, InvalidArgumentError } from "./errors.js";
import { ffiSingTransform, WARN_EMPTY_MASK, WARN_FULL_MASK } from "./ffi.js";
import type { BufferView, Dims, Spacing } from "./types.js";
import { sameDims, viewProblem, voxelCount } from "./types.js";

export type DegenerateTag = "empty_mask" | "full_mask" | null;

export interface SingResult {
  /** Soft labels in [-1, 1], same layout and length as one mask channel. */
  values: Float32Array;
  dims: Dims;
  spacing: Spacing;
  /** Largest interior distance of the foreground (band radius). */
  beta: number;
  /** Normalizer: largest in-band blended distance. */
  tau: number;
  /** Set when the mask had no boundary and the output is constant. */
  degenerate: DegenerateTag;
}

export interface SingOptions {
  /** Blend between spatial step cost (0) and intensity change (1). */
  lambda?: number;
  /** Confidence floor assigned on the boundary itself. */
  delta?: number;
}

function tagFromBits(bits: number): DegenerateTag {
  if (bits & WARN_EMPTY_MASK) return "empty_mask";
  if (bits & WARN_FULL_MASK) return "full_mask";
  return null;
}

export function singTransform(
  image: BufferView<Float32Array>,
  mask: BufferView<Uint8Array>,
  options: SingOptions = {},
): SingResult {
  const lambda = options.lambda ?? 0.5;
  const delta = options.delta ?? 0.5;
  for (const [view, name] of [[image, "image"], [mask, "mask"]] as const) {
    const problem = viewProblem(view, name);
    if (problem) throw new InvalidArgumentError(problem);
  }
  if (mask.channels !== 1) {
    throw new InvalidArgumentError(`mask must be single-channel, got ${mask.channels}`);
  }
  if (!sameDims(image.dims, mask.dims)) {
    checkStatus(-2, `image dims (${image.dims}) != mask dims (${mask.dims})`);
  }

  const out: BufferView<Float32Array> = {
    dims: image.dims,
    channels: 1,
    spacing: image.spacing,
    data: new Float32Array(voxelCount(image.dims)),
  };
  const scalars = new Float64Array(2);
  const flags = new Uint32Array(1);
  const status = ffiSingTransform(image, mask, lambda, delta, out, scalars, flags);
  checkStatus(status, "sing transform");
  return {
    values: out.data,
    dims: image.dims,
    spacing: image.spacing,
    beta: scalars[0],
    tau: scalars[1],
    degenerate: tagFromBits(flags[0]),
  };
}
