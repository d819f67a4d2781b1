export { CsvFormatError, parseResultsCsv, REQUIRED_COLUMNS } from "./csv.js";
export type { ResultRow } from "./csv.js";
export { extractLineSeries, extractScatterPanels, MissingDataError } from "./data.js";
export type { LineSeries, ScatterPanel } from "./data.js";
export { encodePng } from "./png.js";
export { render } from "./plot.js";
export type { FigureName, PlotSpec } from "./plot.js";
