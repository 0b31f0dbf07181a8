import { describe, expect, it } from "vitest";

import {
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
} from "../src/errors.js";

describe("status codes", () => {
  it("every documented code has a label", () => {
    for (const code of [STATUS_OK, STATUS_INVALID_ARGUMENT, STATUS_DIMS_MISMATCH, STATUS_DATA_FORMAT, STATUS_RUNTIME]) {
      expect(STATUS_LABELS.has(code)).toBe(true);
    }
  });

  it("codes round-trip to their typed exception", () => {
    const table: Array<[number, new (msg: string) => BindingsError, string]> = [
      [STATUS_INVALID_ARGUMENT, InvalidArgumentError, "invalid_argument"],
      [STATUS_DIMS_MISMATCH, DimsMismatchError, "dims_mismatch"],
      [STATUS_DATA_FORMAT, DataFormatError, "data_format"],
      [STATUS_RUNTIME, RuntimeFailure, "runtime_failure"],
    ];
    for (const [code, cls, label] of table) {
      const err = statusToError(code);
      expect(err).toBeInstanceOf(cls);
      expect(err).toBeInstanceOf(BindingsError);
      expect(err.code).toBe(code);
      expect(err.codeLabel).toBe(label);
      expect(err.name).toBe(cls.name);
      expect(err.message).toContain(label);
    }
  });

  it("unknown codes fall back to the base class", () => {
    const err = statusToError(-99);
    expect(err).toBeInstanceOf(BindingsError);
    expect(err.codeLabel).toBe("unknown");
    expect(err.code).toBe(-99);
  });

  it("checkStatus passes 0 and throws with context otherwise", () => {
    expect(() => checkStatus(STATUS_OK)).not.toThrow();
    expect(() => checkStatus(STATUS_DIMS_MISMATCH, "during resample")).toThrow(DimsMismatchError);
    try {
      checkStatus(STATUS_RUNTIME, "spawning tool");
    } catch (err) {
      expect((err as BindingsError).message).toContain("spawning tool");
      expect((err as BindingsError).message).toContain("status -4");
    }
  });
});
