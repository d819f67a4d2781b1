/**
 * The two figure renderers. Layout constants are fixed and fraction axes are
 * pinned to [0, 1], so a given CSV always produces the same pixels.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseResultsCsv } from "./csv.js";
import { extractLineSeries, extractScatterPanels, LineSeries, ScatterPanel } from "./data.js";
import { encodePng } from "./png.js";
import { BLACK, BLUE, Canvas, Color, GREY, RED } from "./raster.js";

export type FigureName = "fig2" | "fig3";

export interface PlotSpec {
  input: string;
  figure: FigureName;
  output: string;
}

const SERIES_COLORS: Record<string, Color> = { borda: BLUE, rsd: RED };

interface Frame {
  x0: number;
  y0: number; // top-left of the plotting area
  w: number;
  h: number;
  xMin: number;
  xMax: number;
}

function toX(frame: Frame, value: number): number {
  return frame.x0 + ((value - frame.xMin) / (frame.xMax - frame.xMin)) * frame.w;
}

function toY(frame: Frame, fraction: number): number {
  return frame.y0 + (1 - fraction) * frame.h; // fraction axis fixed to [0, 1]
}

function drawFrame(
  canvas: Canvas,
  frame: Frame,
  xTicks: number[],
  xLabel: string,
  yLabel: string,
): void {
  for (const t of [0, 0.2, 0.4, 0.6, 0.8, 1.0]) {
    const y = Math.round(toY(frame, t));
    canvas.line(frame.x0, y, frame.x0 + frame.w, y, GREY);
    canvas.textRightAligned(frame.x0 - 6, y - 3, t.toFixed(1), BLACK);
  }
  for (const t of xTicks) {
    const x = Math.round(toX(frame, t));
    canvas.line(x, frame.y0 + frame.h, x, frame.y0 + frame.h + 4, BLACK);
    canvas.textCentered(x, frame.y0 + frame.h + 8, String(t), BLACK);
  }
  canvas.line(frame.x0, frame.y0, frame.x0, frame.y0 + frame.h, BLACK);
  canvas.line(frame.x0, frame.y0 + frame.h, frame.x0 + frame.w, frame.y0 + frame.h, BLACK);
  canvas.textCentered(frame.x0 + frame.w / 2, frame.y0 + frame.h + 22, xLabel, BLACK);
  canvas.textVertical(frame.x0 - 46, Math.round(frame.y0 + frame.h / 2 - 3), yLabel, BLACK);
}

function renderLineChart(series: LineSeries[]): Canvas {
  const canvas = new Canvas(800, 560);
  const frame: Frame = { x0: 70, y0: 30, w: 690, h: 460, xMin: 0, xMax: 26 };
  const ks = series.flatMap((s) => s.points.map((p) => p.k));
  frame.xMin = Math.min(...ks) - 1;
  frame.xMax = Math.max(...ks) + 1;
  const ticks = [...new Set([2, 5, 10, 15, 20, 25].filter((t) => t >= frame.xMin && t <= frame.xMax))];
  drawFrame(canvas, frame, ticks, "BUNDLE SIZE K", "RECOVERED FRACTION");
  for (const s of series) {
    const color = SERIES_COLORS[s.rule] ?? BLACK;
    let prev: { x: number; y: number } | null = null;
    for (const p of s.points) {
      const x = toX(frame, p.k);
      const y = toY(frame, p.mean);
      if (prev) canvas.line(prev.x, prev.y, x, y, color, 2);
      prev = { x, y };
    }
    for (const p of s.points) {
      canvas.disc(toX(frame, p.k), toY(frame, p.mean), 3, color);
    }
  }
  // legend, lower right
  let ly = frame.y0 + frame.h - 40;
  for (const s of series) {
    const color = SERIES_COLORS[s.rule] ?? BLACK;
    const lx = frame.x0 + frame.w - 110;
    canvas.line(lx, ly + 3, lx + 24, ly + 3, color, 2);
    canvas.disc(lx + 12, ly + 3, 3, color);
    canvas.text(lx + 32, ly, s.rule.toUpperCase(), BLACK);
    ly += 16;
  }
  return canvas;
}

function formatNoise(level: number): string {
  return Number.isInteger(level) ? String(level) : level.toString();
}

function renderScatterPanels(panels: ScatterPanel[]): Canvas {
  const canvas = new Canvas(1000, 540);
  const panelWidth = 400;
  panels = panels.slice(0, 2);
  panels.forEach((panel, i) => {
    const frame: Frame = {
      x0: 70 + i * (panelWidth + 90),
      y0: 50,
      w: panelWidth,
      h: 400,
      xMin: 0,
      xMax: 1,
    };
    // fraction-vs-fraction panel: both axes [0, 1]
    for (const t of [0, 0.2, 0.4, 0.6, 0.8, 1.0]) {
      const y = Math.round(toY(frame, t));
      canvas.line(frame.x0, y, frame.x0 + frame.w, y, GREY);
      canvas.textRightAligned(frame.x0 - 6, y - 3, t.toFixed(1), BLACK);
      const x = Math.round(toX(frame, t));
      canvas.line(x, frame.y0 + frame.h, x, frame.y0 + frame.h + 4, BLACK);
      canvas.textCentered(x, frame.y0 + frame.h + 8, t.toFixed(1), BLACK);
    }
    canvas.line(frame.x0, frame.y0, frame.x0, frame.y0 + frame.h, BLACK);
    canvas.line(frame.x0, frame.y0 + frame.h, frame.x0 + frame.w, frame.y0 + frame.h, BLACK);
    // diagonal: points above it favour rsd
    canvas.line(toX(frame, 0), toY(frame, 0), toX(frame, 1), toY(frame, 1), GREY);
    canvas.textCentered(
      frame.x0 + frame.w / 2,
      frame.y0 - 18,
      `NOISE LEVEL ${formatNoise(panel.noiseLevel)}`,
      BLACK,
    );
    canvas.textCentered(frame.x0 + frame.w / 2, frame.y0 + frame.h + 22, "BORDA", BLACK);
    canvas.textVertical(frame.x0 - 46, Math.round(frame.y0 + frame.h / 2 - 3), "RSD", BLACK);
    for (const p of panel.points) {
      canvas.disc(toX(frame, p.x), toY(frame, p.y), 2, BLUE);
    }
  });
  return canvas;
}

export function render(spec: PlotSpec): void {
  const text = readFileSync(spec.input, "utf-8");
  const rows = parseResultsCsv(text);
  let canvas: Canvas;
  if (spec.figure === "fig2") {
    canvas = renderLineChart(extractLineSeries(rows, "fig2"));
  } else if (spec.figure === "fig3") {
    canvas = renderScatterPanels(extractScatterPanels(rows, "fig3"));
  } else {
    throw new Error(`unknown figure ${JSON.stringify(spec.figure)}`);
  }
  writeFileSync(spec.output, encodePng(canvas.width, canvas.height, canvas.pixels));
}
