/**
 * Binary volume container: 36-byte header, then float32 payload.
 *
 * Header layout (little endian): 4-byte magic "SVOL", u32 version,
 * u32 nx, u32 ny, u32 nz, u32 channels, f32 sx, f32 sy, f32 sz.
 * Payload is nx*ny*nz*channels float32 values, x fastest, channel
 * slowest. Masks travel as 0.0/1.0 volumes. Soft-label outputs carry a
 * text sidecar `<path>.meta` with `key=value` lines.
 */

import { DataFormatError } from "./errors.js";
import type { BufferView, Dims, Spacing } from "./types.js";
import { expectedLength, voxelCount } from "./types.js";

export const SVOL_MAGIC = "SVOL";
export const SVOL_VERSION = 1;
export const SVOL_HEADER_SIZE = 36;

const LITTLE_ENDIAN_HOST = new Uint8Array(new Uint32Array([1]).buffer)[0] === 1;

function assertLittleEndianHost(): void {
  // payload reads/writes go through Float32Array views, which follow
  // host byte order; the format itself is little endian
  if (!LITTLE_ENDIAN_HOST) {
    throw new DataFormatError("volume payloads require a little-endian host");
  }
}

export function encodeSvol(view: BufferView<Float32Array>): Uint8Array {
  assertLittleEndianHost();
  const [nx, ny, nz] = view.dims;
  const bytes = new Uint8Array(SVOL_HEADER_SIZE + 4 * view.data.length);
  const header = new DataView(bytes.buffer, 0, SVOL_HEADER_SIZE);
  for (let i = 0; i < 4; i++) header.setUint8(i, SVOL_MAGIC.charCodeAt(i));
  header.setUint32(4, SVOL_VERSION, true);
  header.setUint32(8, nx, true);
  header.setUint32(12, ny, true);
  header.setUint32(16, nz, true);
  header.setUint32(20, view.channels, true);
  header.setFloat32(24, view.spacing[0], true);
  header.setFloat32(28, view.spacing[1], true);
  header.setFloat32(32, view.spacing[2], true);
  bytes.set(new Uint8Array(view.data.buffer, view.data.byteOffset, 4 * view.data.length), SVOL_HEADER_SIZE);
  return bytes;
}

/** Reframes a 0/1 mask as a float32 volume view for serialization. */
export function maskAsVolume(mask: BufferView<Uint8Array>): BufferView<Float32Array> {
  const data = new Float32Array(mask.data.length);
  for (let i = 0; i < mask.data.length; i++) data[i] = mask.data[i] !== 0 ? 1.0 : 0.0;
  return { dims: mask.dims, channels: mask.channels, spacing: mask.spacing, data };
}

export function decodeSvol(bytes: Uint8Array): BufferView<Float32Array> {
  assertLittleEndianHost();
  if (bytes.length < SVOL_HEADER_SIZE) {
    throw new DataFormatError(`truncated header: got ${bytes.length} of ${SVOL_HEADER_SIZE} bytes`);
  }
  const header = new DataView(bytes.buffer, bytes.byteOffset, SVOL_HEADER_SIZE);
  const magic = String.fromCharCode(header.getUint8(0), header.getUint8(1), header.getUint8(2), header.getUint8(3));
  if (magic !== SVOL_MAGIC) {
    throw new DataFormatError(`bad magic ${JSON.stringify(magic)}, expected ${JSON.stringify(SVOL_MAGIC)}`);
  }
  const version = header.getUint32(4, true);
  if (version !== SVOL_VERSION) {
    throw new DataFormatError(`unsupported version ${version}, expected ${SVOL_VERSION}`);
  }
  const dims: Dims = [header.getUint32(8, true), header.getUint32(12, true), header.getUint32(16, true)];
  const channels = header.getUint32(20, true);
  if (Math.min(dims[0], dims[1], dims[2], channels) < 1) {
    throw new DataFormatError(`invalid dims/channels (${dims.join(", ")}) x ${channels}`);
  }
  const spacing: Spacing = [header.getFloat32(24, true), header.getFloat32(28, true), header.getFloat32(32, true)];
  const count = voxelCount(dims) * channels;
  const payload = bytes.subarray(SVOL_HEADER_SIZE);
  if (payload.length < 4 * count) {
    throw new DataFormatError(`truncated payload: expected ${4 * count} bytes, got ${payload.length}`);
  }
  // copy: the input may be a pooled buffer slice with arbitrary alignment
  const copy = new Uint8Array(4 * count);
  copy.set(payload.subarray(0, 4 * count));
  return { dims, channels, spacing, data: new Float32Array(copy.buffer) };
}

export interface SvolMeta {
  beta: number;
  tau: number;
  lambda: number;
  delta: number;
  degenerate: string | null;
}

/** Parses a `key=value` sidecar; float fields round-trip exactly. */
export function parseMeta(text: string): SvolMeta {
  const fields = new Map<string, string>();
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    const eq = line.indexOf("=");
    if (line && eq > 0) fields.set(line.slice(0, eq), line.slice(eq + 1));
  }
  const float = (key: string): number => {
    const raw = fields.get(key);
    if (raw === undefined) throw new DataFormatError(`sidecar is missing required key ${JSON.stringify(key)}`);
    const value = Number(raw);
    if (Number.isNaN(value)) throw new DataFormatError(`sidecar key ${key} has non-numeric value ${JSON.stringify(raw)}`);
    return value;
  };
  return {
    beta: float("beta"),
    tau: float("tau"),
    lambda: float("lambda"),
    delta: float("delta"),
    degenerate: fields.get("degenerate") ?? null,
  };
}

export function volumeByteLength(view: BufferView<Float32Array | Uint8Array>): number {
  return SVOL_HEADER_SIZE + 4 * expectedLength(view);
}
