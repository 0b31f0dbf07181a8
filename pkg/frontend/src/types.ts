/**
 * Caller-owned views over volume grids.
 *
 * `dims` is `(nx, ny, nz)` and `data` is contiguous in the global
 * linearization order: x fastest, then y, then z, channel slowest.
 * That is the same layout the toolkit's volume files use on disk, so a
 * view's buffer can be framed and shipped without reshuffling.
 */

export type Dims = readonly [number, number, number];
export type Spacing = readonly [number, number, number];

export interface BufferView<T extends Float32Array | Uint8Array = Float32Array> {
  readonly dims: Dims;
  readonly channels: number;
  readonly spacing: Spacing;
  readonly data: T;
}

export function voxelCount(dims: Dims): number {
  return dims[0] * dims[1] * dims[2];
}

export function expectedLength(view: BufferView<Float32Array | Uint8Array>): number {
  return voxelCount(view.dims) * view.channels;
}

export function sameDims(a: Dims, b: Dims): boolean {
  return a[0] === b[0] && a[1] === b[1] && a[2] === b[2];
}

/**
 * Returns a human-readable defect description, or null when the view is
 * well formed. Never throws; the status-code layer turns non-null into
 * an invalid-argument status and the wrapper layer into an exception.
 */
export function viewProblem(view: BufferView<Float32Array | Uint8Array>, name: string): string | null {
  const [nx, ny, nz] = view.dims;
  for (const d of [nx, ny, nz]) {
    if (!Number.isInteger(d) || d < 1) return `${name} dims must be positive integers, got (${view.dims})`;
  }
  if (!Number.isInteger(view.channels) || view.channels < 1) {
    return `${name} channels must be a positive integer, got ${view.channels}`;
  }
  for (const s of view.spacing) {
    if (!Number.isFinite(s) || s <= 0) return `${name} spacing must be positive and finite, got (${view.spacing})`;
  }
  if (view.data.length !== expectedLength(view)) {
    return `${name} buffer length ${view.data.length} != nx*ny*nz*channels = ${expectedLength(view)}`;
  }
  return null;
}

export function makeView<T extends Float32Array | Uint8Array>(
  dims: Dims,
  data: T,
  spacing: Spacing = [1, 1, 1],
  channels = 1,
): BufferView<T> {
  return { dims, channels, spacing, data };
}
