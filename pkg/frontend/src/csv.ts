import Papa from "papaparse";

/** One harness trace row. The header is fixed by the producing CLI. */
export interface TraceRow {
  setting: string;
  agent: string;
  param_index: number;
  param_value: number;
  run_id: number;
  t: number;
  metric: string;
  value: number;
}

export const REQUIRED_COLUMNS = [
  "setting",
  "agent",
  "param_index",
  "param_value",
  "run_id",
  "t",
  "metric",
  "value",
] as const;

/**
 * Parse harness CSV text into rows.
 *
 * Throws on empty input, a header missing required columns, or a
 * non-numeric entry in a numeric column — a figure built from a
 * defective trace would be silently wrong.
 */
export function parseTrace(text: string): TraceRow[] {
  if (text.trim() === "") {
    throw new Error("empty CSV: nothing to plot");
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`malformed CSV at row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = REQUIRED_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new Error(`CSV is missing required columns: ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new Error("empty CSV: header only, no data rows");
  }
  return parsed.data.map((raw, i) => ({
    setting: raw.setting,
    agent: raw.agent,
    param_index: toNumber(raw.param_index, "param_index", i),
    param_value: toNumber(raw.param_value, "param_value", i),
    run_id: toNumber(raw.run_id, "run_id", i),
    t: toNumber(raw.t, "t", i),
    metric: raw.metric,
    value: toNumber(raw.value, "value", i),
  }));
}

function toNumber(s: string, column: string, row: number): number {
  const v = Number(s);
  if (s === undefined || s === "" || Number.isNaN(v)) {
    throw new Error(`non-numeric ${column} at data row ${row}: ${JSON.stringify(s)}`);
  }
  return v;
}
