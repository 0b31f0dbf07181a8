export type { BufferView, Dims, Spacing } from "./types.js";
export { expectedLength, makeView, sameDims, viewProblem, voxelCount } from "./types.js";
export {
  BindingsError,
  DataFormatError,
  DimsMismatchError,
  InvalidArgumentError,
  RuntimeFailure,
  STATUS_DATA_FORMAT,
  STATUS_DIMS_MISMATCH,
  STATUS_INVALID_ARGUMENT,
  STATUS_LABELS,
  STATUS_OK,
  STATUS_RUNTIME,
  checkStatus,
  statusToError,
} from "./errors.js";
export type { SvolMeta } from "./svol.js";
export {
  SVOL_HEADER_SIZE,
  SVOL_MAGIC,
  SVOL_VERSION,
  decodeSvol,
  encodeSvol,
  maskAsVolume,
  parseMeta,
  volumeByteLength,
} from "./svol.js";
export type { FocalConfig, FocalReport } from "./focal.js";
export {
  DEFAULT_EPSILON,
  DEFAULT_GAMMA,
  FocalL1Function,
  focalL1,
  focalL1Report,
  treeSum,
  upcast,
} from "./focal.js";
export { SINGR_FFI_V1, WARN_EMPTY_MASK, WARN_FULL_MASK, ffiFocalL1, ffiSingTransform } from "./ffi.js";
export type { DegenerateTag, SingOptions, SingResult } from "./sing.js";
export { singTransform } from "./sing.js";
