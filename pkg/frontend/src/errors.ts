/**
 * Status-code error model.
 *
 * Calls across the tool boundary never throw; they return an integer
 * status from the table below. The wrapper layer converts any nonzero
 * status into the matching typed exception.
 */

export const STATUS_OK = 0;
export const STATUS_INVALID_ARGUMENT = -1;
export const STATUS_DIMS_MISMATCH = -2;
export const STATUS_DATA_FORMAT = -3;
export const STATUS_RUNTIME = -4;

export const STATUS_LABELS: ReadonlyMap<number, string> = new Map([
  [STATUS_OK, "ok"],
  [STATUS_INVALID_ARGUMENT, "invalid_argument"],
  [STATUS_DIMS_MISMATCH, "dims_mismatch"],
  [STATUS_DATA_FORMAT, "data_format"],
  [STATUS_RUNTIME, "runtime_failure"],
]);

export class BindingsError extends Error {
  readonly code: number;
  readonly codeLabel: string;

  constructor(code: number, message: string) {
    super(message);
    this.name = new.target.name;
    this.code = code;
    this.codeLabel = STATUS_LABELS.get(code) ?? "unknown";
  }
}

export class InvalidArgumentError extends BindingsError {
  constructor(message: string) {
    super(STATUS_INVALID_ARGUMENT, message);
  }
}

export class DimsMismatchError extends BindingsError {
  constructor(message: string) {
    super(STATUS_DIMS_MISMATCH, message);
  }
}

export class DataFormatError extends BindingsError {
  constructor(message: string) {
    super(STATUS_DATA_FORMAT, message);
  }
}

export class RuntimeFailure extends BindingsError {
  constructor(message: string) {
    super(STATUS_RUNTIME, message);
  }
}

export function statusToError(code: number, detail = ""): BindingsError {
  const label = STATUS_LABELS.get(code) ?? "unknown";
  const message = detail ? `${detail} (status ${code}: ${label})` : `status ${code}: ${label}`;
  switch (code) {
    case STATUS_INVALID_ARGUMENT:
      return new InvalidArgumentError(message);
    case STATUS_DIMS_MISMATCH:
      return new DimsMismatchError(message);
    case STATUS_DATA_FORMAT:
      return new DataFormatError(message);
    case STATUS_RUNTIME:
      return new RuntimeFailure(message);
    default:
      return new BindingsError(code, message);
  }
}

/** Throws the typed exception for a nonzero status; no-op on STATUS_OK. */
export function checkStatus(code: number, detail = ""): void {
  if (code !== STATUS_OK) throw statusToError(code, detail);
}
