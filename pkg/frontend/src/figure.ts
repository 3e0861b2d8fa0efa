import { readFileSync, writeFileSync } from "node:fs";

import { deviationPanels, errSweepPanels, Panel } from "./aggregate.js";
import { parseTrace } from "./csv.js";
import { renderFigure } from "./svg.js";

export type FigureKind = "err-sweep" | "deviation";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
  format: "svg";
}

/** Build the SVG for a figure kind from raw CSV text. */
export function renderFromCsv(kind: FigureKind, csvText: string): string {
  const rows = parseTrace(csvText);
  let panels: Panel[];
  if (kind === "err-sweep") {
    panels = errSweepPanels(rows.filter((r) => r.metric === "err"));
    if (panels.length === 0) {
      throw new Error('no rows with metric "err": not a learning trace');
    }
    return renderFigure(panels, {
      title: "Mean incorrect implications over runs",
      yLabel: "Err(t)",
      logY: true,
    });
  }
  if (kind === "deviation") {
    panels = deviationPanels(rows.filter((r) => r.metric === "deviation"));
    if (panels.length === 0) {
      throw new Error('no rows with metric "deviation": not a navigation trace');
    }
    return renderFigure(panels, {
      title: "Mean deviation from target over runs",
      yLabel: "deviation",
      logY: false,
    });
  }
  throw new Error(`unknown figure kind: ${kind as string}`);
}

/** Read the spec's input CSV, render, and write the output file. */
export function plot(spec: FigureSpec): void {
  if (spec.format !== "svg") {
    throw new Error(
      `unsupported format ${JSON.stringify(spec.format)}: only svg output is produced`,
    );
  }
  const svg = renderFromCsv(spec.kind, readFileSync(spec.input, "utf-8"));
  writeFileSync(spec.output, svg);
}
