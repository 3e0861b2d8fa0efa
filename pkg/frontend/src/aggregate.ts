import { TraceRow } from "./csv.js";

/** A single plotted curve: mean value per time step over runs. */
export interface Curve {
  label: string;
  points: { t: number; mean: number }[];
}

/** One figure panel: the curves for one setting. */
export interface Panel {
  setting: string;
  curves: Curve[];
}

/**
 * Group rows into per-setting panels with one curve per key, where the
 * key is a row property (the sweep parameter for learning traces, the
 * agent kind for navigation traces). Each curve point is the mean over
 * runs at that time step; ordering is deterministic: settings by first
 * appearance, curves by key order below, points by t.
 */
export function buildPanels(
  rows: TraceRow[],
  curveKey: (row: TraceRow) => string,
  curveOrder: (a: string, b: string) => number,
): Panel[] {
  const settings: string[] = [];
  const bySetting = new Map<string, Map<string, Map<number, number[]>>>();
  for (const row of rows) {
    let curves = bySetting.get(row.setting);
    if (!curves) {
      curves = new Map();
      bySetting.set(row.setting, curves);
      settings.push(row.setting);
    }
    const key = curveKey(row);
    let byT = curves.get(key);
    if (!byT) {
      byT = new Map();
      curves.set(key, byT);
    }
    let values = byT.get(row.t);
    if (!values) {
      values = [];
      byT.set(row.t, values);
    }
    values.push(row.value);
  }
  return settings.map((setting) => {
    const curves = bySetting.get(setting)!;
    const labels = [...curves.keys()].sort(curveOrder);
    return {
      setting,
      curves: labels.map((label) => ({
        label,
        points: [...curves.get(label)!.entries()]
          .sort((a, b) => a[0] - b[0])
          .map(([t, values]) => ({ t, mean: mean(values) })),
      })),
    };
  });
}

function mean(values: number[]): number {
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

/** Curves keyed by sweep parameter, labelled with its value. */
export function errSweepPanels(rows: TraceRow[]): Panel[] {
  const valueByIndex = new Map<number, number>();
  for (const row of rows) valueByIndex.set(row.param_index, row.param_value);
  return buildPanels(
    rows,
    (row) => String(row.param_index),
    (a, b) => Number(a) - Number(b),
  ).map((panel) => ({
    setting: panel.setting,
    curves: panel.curves.map((curve) => ({
      label: formatParam(valueByIndex.get(Number(curve.label))!),
      points: curve.points,
    })),
  }));
}

/** Curves keyed by agent kind. */
export function deviationPanels(rows: TraceRow[]): Panel[] {
  return buildPanels(
    rows,
    (row) => row.agent,
    (a, b) => (a < b ? -1 : a > b ? 1 : 0),
  );
}

function formatParam(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 0.0001 && magnitude < 10000) {
    return String(Number(value.toPrecision(4)));
  }
  return value.toExponential(3);
}
