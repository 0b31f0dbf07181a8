import { readFileSync } from "node:fs";

import type { BufferView, Dims, Spacing } from "../src/types.js";

export interface FocalFixture {
  name: string;
  gamma: number;
  epsilon: number;
  n: number;
  s_f32: string;
  z_f32: string;
  loss: number;
  weights_f64: string;
  grad_z_f64: string;
  grad_logit_f64: string;
  grad_logit_f32: string;
}

export interface SingFixture {
  name: string;
  dims: [number, number, number];
  channels: number;
  spacing: [number, number, number];
  lam: number;
  delta: number;
  image_f32: string;
  mask_u8: string;
  values_f32: string;
  beta: number;
  tau: number;
  degenerate: string | null;
  warnings: number;
}

export interface ParityDoc {
  focal: FocalFixture[];
  sing: SingFixture[];
}

export function loadParity(): ParityDoc {
  const path = new URL("./fixtures/parity.json", import.meta.url);
  return JSON.parse(readFileSync(path, "utf8")) as ParityDoc;
}

export function b64ToBytes(b64: string): Uint8Array {
  const buf = Buffer.from(b64, "base64");
  const copy = new Uint8Array(buf.length);
  copy.set(buf);
  return copy;
}

export function b64ToF32(b64: string): Float32Array {
  const bytes = b64ToBytes(b64);
  return new Float32Array(bytes.buffer, 0, bytes.length >> 2);
}

export function b64ToF64(b64: string): Float64Array {
  const bytes = b64ToBytes(b64);
  return new Float64Array(bytes.buffer, 0, bytes.length >> 3);
}

export function b64ToU8(b64: string): Uint8Array {
  return b64ToBytes(b64);
}

/** Bit-pattern equality, strict about NaN payloads and signed zero. */
export function bitsEqualF64(a: Float64Array, b: Float64Array): boolean {
  if (a.length !== b.length) return false;
  const ua = new BigUint64Array(a.buffer, a.byteOffset, a.length);
  const ub = new BigUint64Array(b.buffer, b.byteOffset, b.length);
  for (let i = 0; i < ua.length; i++) {
    if (ua[i] !== ub[i]) return false;
  }
  return true;
}

export function bitsEqualF32(a: Float32Array, b: Float32Array): boolean {
  if (a.length !== b.length) return false;
  const ua = new Uint32Array(a.buffer, a.byteOffset, a.length);
  const ub = new Uint32Array(b.buffer, b.byteOffset, b.length);
  for (let i = 0; i < ua.length; i++) {
    if (ua[i] !== ub[i]) return false;
  }
  return true;
}

export function imageView(fix: SingFixture): BufferView<Float32Array> {
  return {
    dims: fix.dims as Dims,
    channels: fix.channels,
    spacing: fix.spacing as Spacing,
    data: b64ToF32(fix.image_f32),
  };
}

export function maskView(fix: SingFixture): BufferView<Uint8Array> {
  return {
    dims: fix.dims as Dims,
    channels: 1,
    spacing: fix.spacing as Spacing,
    data: b64ToU8(fix.mask_u8),
  };
}

export function flatView(data: Float32Array): BufferView<Float32Array> {
  return { dims: [data.length, 1, 1], channels: 1, spacing: [1, 1, 1], data };
}
