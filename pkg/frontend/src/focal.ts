/**
 * Difficulty-weighted L1 regression loss over soft labels, with analytic
 * gradients. All arithmetic is float64 in a fixed operation order, so
 * results are bit-identical to the reference implementation: same-sign
 * pairs are "easy" and weighted by |d|^gamma / (max(|s|,|z|) + eps),
 * opposite-sign pairs are "hard" and weighted by 1 / (max(|s|,|z|) + eps),
 * and exact matches contribute nothing. The weight is a constant in the
 * gradient (no derivative flows through it).
 */

import { InvalidArgumentError } from "./errors.js";

export interface FocalConfig {
  /** Exponent on |s - z| in the easy branch; > 0. */
  gamma?: number;
  /** Denominator stabilizer; >= 0. */
  epsilon?: number;
}

export interface FocalReport {
  loss: number;
  weights: Float64Array;
  gradWrtZ: Float64Array;
  gradWrtLogit: Float64Array;
}

export const DEFAULT_GAMMA = 1.0;
export const DEFAULT_EPSILON = 1e-3;

/**
 * Deterministic fold-halves tree sum: repeatedly adds the upper half of
 * the buffer onto the lower half. The reduction order is fully specified,
 * which is what makes cross-implementation bit parity possible.
 */
export function treeSum(values: ArrayLike<number>): number {
  const buf = Float64Array.from(values);
  let n = buf.length;
  if (n === 0) return 0.0;
  while (n > 1) {
    const m = n >> 1;
    for (let i = 0; i < m; i++) buf[i] += buf[m + i];
    if (n & 1) buf[m] = buf[2 * m];
    n = m + (n & 1);
  }
  return buf[0];
}

// exponents 1 and 2 stay in plain arithmetic so parity with other
// implementations does not hinge on libm pow rounding
function power(base: number, exponent: number): number {
  if (exponent === 1.0) return base;
  if (exponent === 2.0) return base * base;
  return Math.pow(base, exponent);
}

/**
 * Core computation; assumes `targets` and `predictions` are already
 * validated, equal-length, float64. Prefer `focalL1` at call sites.
 */
export function focalL1Report(
  targets: Float64Array,
  predictions: Float64Array,
  gamma: number,
  epsilon: number,
): FocalReport {
  const n = targets.length;
  const weights = new Float64Array(n);
  const gradWrtZ = new Float64Array(n);
  const gradWrtLogit = new Float64Array(n);
  const products = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const s = targets[i];
    const z = predictions[i];
    const d = s - z;
    const ad = Math.abs(d);
    const easy = s * z >= 0.0;
    const numer = easy ? power(ad, gamma) : 1.0;
    const denom = Math.max(Math.abs(s), Math.abs(z)) + epsilon;
    const w = d === 0.0 ? 0.0 : numer / denom;
    weights[i] = w;
    products[i] = ad * w;
    gradWrtZ[i] = d === 0.0 ? 0.0 : (-Math.sign(d) * w) / n;
    gradWrtLogit[i] = gradWrtZ[i] * (1.0 - z * z);
  }
  return { loss: treeSum(products) / n, weights, gradWrtZ, gradWrtLogit };
}

function checkedConfig(config: FocalConfig): [number, number] {
  const gamma = config.gamma ?? DEFAULT_GAMMA;
  const epsilon = config.epsilon ?? DEFAULT_EPSILON;
  if (!Number.isFinite(gamma) || gamma <= 0) {
    throw new InvalidArgumentError(`gamma must be positive and finite, got ${gamma}`);
  }
  if (!Number.isFinite(epsilon) || epsilon < 0) {
    throw new InvalidArgumentError(`epsilon must be >= 0 and finite, got ${epsilon}`);
  }
  return [gamma, epsilon];
}

export function upcast(values: Float32Array | Float64Array): Float64Array {
  return values instanceof Float64Array ? values : Float64Array.from(values);
}

function checkedPair(
  targets: Float32Array | Float64Array,
  predictions: Float32Array | Float64Array,
): [Float64Array, Float64Array] {
  const s = upcast(targets);
  const z = upcast(predictions);
  if (s.length !== z.length) {
    throw new InvalidArgumentError(`target length ${s.length} != prediction length ${z.length}`);
  }
  if (s.length === 0) throw new InvalidArgumentError("loss over an empty grid is undefined");
  for (const [name, arr] of [["targets", s], ["predictions", z]] as const) {
    for (let i = 0; i < arr.length; i++) {
      if (!Number.isFinite(arr[i]) || Math.abs(arr[i]) > 1.0) {
        throw new InvalidArgumentError(`${name} must lie in [-1, 1]`);
      }
    }
  }
  return [s, z];
}

/** Validating entry point; float32 inputs are upcast exactly. */
export function focalL1(
  targets: Float32Array | Float64Array,
  predictions: Float32Array | Float64Array,
  config: FocalConfig = {},
): FocalReport {
  const [gamma, epsilon] = checkedConfig(config);
  const [s, z] = checkedPair(targets, predictions);
  return focalL1Report(s, z, gamma, epsilon);
}

/**
 * Custom-gradient hook for training loops that keep their own autodiff
 * tape: `forward` returns the scalar loss, `backward` returns the
 * gradient with respect to the pre-tanh logits, scaled by `gradOutput`.
 */
export class FocalL1Function {
  private report: FocalReport | null = null;

  constructor(readonly config: FocalConfig = {}) {}

  forward(targets: Float32Array | Float64Array, predictions: Float32Array | Float64Array): number {
    this.report = focalL1(targets, predictions, this.config);
    return this.report.loss;
  }

  backward(gradOutput = 1.0): Float64Array {
    if (this.report === null) throw new InvalidArgumentError("backward called before forward");
    const grad = Float64Array.from(this.report.gradWrtLogit);
    if (gradOutput !== 1.0) {
      for (let i = 0; i < grad.length; i++) grad[i] *= gradOutput;
    }
    return grad;
  }

  get lastReport(): FocalReport | null {
    return this.report;
  }
}
