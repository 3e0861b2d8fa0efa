import { Panel } from "./aggregate.js";

export interface RenderOptions {
  title: string;
  yLabel: string;
  /** log10 y-axis (zero means are clamped to one decade below the
   *  smallest positive mean, so converged curves stay visible). */
  logY: boolean;
}

const PANEL_W = 360;
const PANEL_H = 260;
const MARGIN = { top: 34, right: 16, bottom: 42, left: 56 };
const LEGEND_W = 128;
const COLS = 2;

/** Fixed qualitative palette; curves cycle through it in label order. */
const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/**
 * Render panels into a standalone SVG document. Pure function of its
 * inputs: no timestamps, no randomness, fixed styling — re-rendering
 * the same data yields byte-identical output.
 */
export function renderFigure(panels: Panel[], options: RenderOptions): string {
  if (panels.length === 0) {
    throw new Error("no panels to render");
  }
  const cols = Math.min(COLS, panels.length);
  const rows = Math.ceil(panels.length / cols);
  const width = cols * (PANEL_W + LEGEND_W);
  const height = rows * PANEL_H + 24;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    text(width / 2, 16, escapeXml(options.title), 14, "middle", "bold"),
  ];
  panels.forEach((panel, i) => {
    const x0 = (i % cols) * (PANEL_W + LEGEND_W);
    const y0 = 24 + Math.floor(i / cols) * PANEL_H;
    parts.push(renderPanel(panel, x0, y0, options));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function renderPanel(
  panel: Panel,
  x0: number,
  y0: number,
  options: RenderOptions,
): string {
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const allPoints = panel.curves.flatMap((c) => c.points);
  if (allPoints.length === 0) {
    throw new Error(`panel "${panel.setting}" has no data points`);
  }

  const ts = allPoints.map((p) => p.t);
  const tMin = Math.min(...ts);
  const tMax = Math.max(...ts);
  const tSpan = tMax > tMin ? tMax - tMin : 1;
  const x = (t: number) => MARGIN.left + ((t - tMin) / tSpan) * innerW;

  let yValue: (mean: number) => number;
  let yMin: number;
  let yMax: number;
  let yTicks: { v: number; label: string }[];
  if (options.logY) {
    const positive = allPoints.map((p) => p.mean).filter((m) => m > 0);
    const floor =
      positive.length > 0
        ? Math.pow(10, Math.floor(Math.log10(Math.min(...positive))) - 1)
        : 0.1;
    yValue = (m) => Math.log10(Math.max(m, floor));
    const top = positive.length > 0 ? Math.max(...positive) : 1;
    yMin = Math.log10(floor);
    yMax = Math.ceil(Math.log10(top));
    if (yMax <= yMin) yMax = yMin + 1;
    yTicks = [];
    for (let d = Math.ceil(yMin); d <= yMax; d += 1) {
      yTicks.push({ v: d, label: d === 0 ? "1" : `1e${d}` });
    }
  } else {
    yValue = (m) => m;
    const means = allPoints.map((p) => p.mean);
    yMin = 0;
    yMax = Math.max(...means, 1e-9) * 1.05;
    yTicks = linearTicks(yMin, yMax).map((v) => ({ v, label: tickLabel(v) }));
  }
  const ySpan = yMax - yMin;
  const y = (m: number) => MARGIN.top + innerH - ((yValue(m) - yMin) / ySpan) * innerH;

  const parts: string[] = [`<g transform="translate(${x0},${y0})">`];
  parts.push(text(MARGIN.left + innerW / 2, MARGIN.top - 10, escapeXml(panel.setting), 12, "middle", "bold"));
  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" ` +
      `fill="none" stroke="#000000" stroke-width="1"/>`,
  );
  // y grid + labels
  for (const tick of yTicks) {
    const py = round(MARGIN.top + innerH - ((tick.v - yMin) / ySpan) * innerH);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${MARGIN.left + innerW}" y2="${py}" ` +
        `stroke="#dddddd" stroke-width="0.5"/>`,
      text(MARGIN.left - 6, py + 3, tick.label, 9, "end"),
    );
  }
  // x ticks
  for (const tick of linearTicks(tMin, tMax)) {
    const px = round(x(tick));
    parts.push(
      `<line x1="${px}" y1="${MARGIN.top + innerH}" x2="${px}" y2="${MARGIN.top + innerH + 4}" ` +
        `stroke="#000000" stroke-width="1"/>`,
      text(px, MARGIN.top + innerH + 16, tickLabel(tick), 9, "middle"),
    );
  }
  parts.push(
    text(MARGIN.left + innerW / 2, PANEL_H - 8, "t", 11, "middle"),
    `<text x="14" y="${MARGIN.top + innerH / 2}" font-size="11" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${MARGIN.top + innerH / 2})">${escapeXml(options.yLabel)}</text>`,
  );
  // curves
  panel.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const path = curve.points
      .map((p) => `${round(x(p.t))},${round(y(p.mean))}`)
      .join(" ");
    parts.push(
      `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
  });
  // legend
  panel.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = MARGIN.top + 8 + i * 14;
    parts.push(
      `<line x1="${PANEL_W + 4}" y1="${ly}" x2="${PANEL_W + 22}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="1.5"/>`,
      text(PANEL_W + 26, ly + 3, escapeXml(curve.label), 9),
    );
  });
  parts.push("</g>");
  return parts.join("\n");
}

/** 4-6 round tick values covering [lo, hi]. */
export function linearTicks(lo: number, hi: number): number[] {
  if (hi <= lo) return [lo];
  const rawStep = (hi - lo) / 4;
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const residual = rawStep / magnitude;
  const step = magnitude * (residual >= 5 ? 5 : residual >= 2 ? 2 : 1);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function tickLabel(v: number): string {
  const magnitude = Math.abs(v);
  if (v !== 0 && (magnitude >= 100000 || magnitude < 0.01)) {
    return v.toExponential(1);
  }
  return String(Number(v.toPrecision(6)));
}

function round(v: number): number {
  return Math.round(v * 100) / 100;
}

function text(
  x: number,
  y: number,
  content: string,
  size: number,
  anchor?: string,
  weight?: string,
): string {
  const anchorAttr = anchor ? ` text-anchor="${anchor}"` : "";
  const weightAttr = weight ? ` font-weight="${weight}"` : "";
  return `<text x="${round(x)}" y="${round(y)}" font-size="${size}"${anchorAttr}${weightAttr}>${content}</text>`;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
