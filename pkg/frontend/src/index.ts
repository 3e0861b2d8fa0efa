export { parseTrace, TraceRow, REQUIRED_COLUMNS } from "./csv.js";
export {
  buildPanels,
  errSweepPanels,
  deviationPanels,
  Curve,
  Panel,
} from "./aggregate.js";
export { renderFigure, RenderOptions, linearTicks } from "./svg.js";
export { renderFromCsv, plot, FigureSpec, FigureKind } from "./figure.js";
