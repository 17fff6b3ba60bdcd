import { describe, expect, it } from "vitest";

import { parseEnergyCsv } from "../src/csv.js";

const HEADER = "t,q_1,q_2,H,abs_energy_error,projected";

describe("parseEnergyCsv", () => {
  it("extracts time and error columns", () => {
    const text = [
      HEADER,
      "0,2.3,0,0.666,0,0",
      "0.1,2.29,-0.07,0.667,0.001,0",
    ].join("\n");
    const parsed = parseEnergyCsv(text);
    expect(parsed.t).toEqual([0, 0.1]);
    expect(parsed.error).toEqual([0, 0.001]);
  });

  it("round-trips 17-digit floats exactly", () => {
    const value = "0.0027803813173375991";
    const text = [HEADER, `0.10000000000000001,1,2,3,${value},0`].join("\n");
    expect(parseEnergyCsv(text).error[0]).toBe(Number(value));
  });

  it("rejects an empty file", () => {
    expect(() => parseEnergyCsv("")).toThrow(/empty file/);
  });

  it("rejects a header without the error column", () => {
    expect(() => parseEnergyCsv("t,q_1,H,projected\n0,1,2,0")).toThrow(
      /missing column/,
    );
  });

  it("rejects a header without state columns", () => {
    expect(() =>
      parseEnergyCsv("t,H,abs_energy_error,projected\n0,1,0,0"),
    ).toThrow(/q_\*/);
  });

  it("rejects a file with only a header", () => {
    expect(() => parseEnergyCsv(HEADER)).toThrow(/no data rows/);
  });

  it("rejects short rows with the line number", () => {
    const text = [HEADER, "0,2.3,0,0.666,0,0", "0.1,2.29"].join("\n");
    expect(() => parseEnergyCsv(text)).toThrow(/line 3/);
  });

  it("rejects non-numeric values in the consumed columns", () => {
    const text = [HEADER, "0,2.3,0,0.666,zero,0"].join("\n");
    expect(() => parseEnergyCsv(text)).toThrow(/non-numeric/);
  });
});
