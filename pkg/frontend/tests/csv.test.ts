import { describe, expect, it } from "vitest";

import { parseTrace } from "../src/csv.js";

const HEADER = "setting,agent,param_index,param_value,run_id,t,metric,value";

describe("parseTrace", () => {
  it("parses rows with numeric coercion", () => {
    const rows = parseTrace(
      `${HEADER}\npath,empirical,0,0.000125,3,10,err,42.0\n`,
    );
    expect(rows).toEqual([
      {
        setting: "path",
        agent: "empirical",
        param_index: 0,
        param_value: 0.000125,
        run_id: 3,
        t: 10,
        metric: "err",
        value: 42.0,
      },
    ]);
  });

  it("rejects empty input", () => {
    expect(() => parseTrace("")).toThrow(/empty CSV/);
    expect(() => parseTrace("   \n  ")).toThrow(/empty CSV/);
  });

  it("rejects a header-only file", () => {
    expect(() => parseTrace(`${HEADER}\n`)).toThrow(/header only/);
  });

  it("rejects missing columns", () => {
    expect(() =>
      parseTrace("setting,agent,t,value\npath,empirical,1,2\n"),
    ).toThrow(/missing required columns: param_index, param_value, run_id, metric/);
  });

  it("rejects non-numeric numeric fields", () => {
    expect(() =>
      parseTrace(`${HEADER}\npath,empirical,0,0.1,0,ten,err,1\n`),
    ).toThrow(/non-numeric t at data row 0/);
  });

  it("accepts extra columns beyond the required set", () => {
    const rows = parseTrace(
      `${HEADER},note\npath,empirical,0,0.1,0,10,err,1,hello\n`,
    );
    expect(rows).toHaveLength(1);
    expect(rows[0].value).toBe(1);
  });
});
