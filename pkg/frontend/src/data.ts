/** Turns raw result rows into the series/panels the two figures need. */

import { ResultRow } from "./csv.js";

export class MissingDataError extends Error {}

export interface LineSeries {
  rule: string;
  points: { k: number; mean: number }[];
}

export interface ScatterPanel {
  noiseLevel: number;
  /** one (borda, rsd) fraction pair per trial, matched by trial_index */
  points: { x: number; y: number }[];
}

/** Mean recovered fraction per (rule, k) from the bundle-size sweep rows. */
export function extractLineSeries(rows: ResultRow[], experiment: string): LineSeries[] {
  const relevant = rows.filter((r) => r.experiment === experiment && r.status === "ok");
  if (relevant.length === 0) {
    throw new MissingDataError(
      `no usable rows for experiment ${JSON.stringify(experiment)} in the CSV`,
    );
  }
  const byRule = new Map<string, Map<number, number[]>>();
  for (const row of relevant) {
    if (row.recoveredFraction === null) continue;
    let perK = byRule.get(row.rule);
    if (!perK) {
      perK = new Map();
      byRule.set(row.rule, perK);
    }
    let cell = perK.get(row.k);
    if (!cell) {
      cell = [];
      perK.set(row.k, cell);
    }
    cell.push(row.recoveredFraction);
  }
  const series: LineSeries[] = [];
  for (const rule of ["borda", "rsd"]) {
    const perK = byRule.get(rule);
    if (!perK) {
      throw new MissingDataError(
        `experiment ${experiment} has no rows for rule ${JSON.stringify(rule)}`,
      );
    }
    const points = [...perK.entries()]
      .map(([k, fractions]) => ({
        k,
        mean: fractions.reduce((a, b) => a + b, 0) / fractions.length,
      }))
      .sort((a, b) => a.k - b.k);
    series.push({ rule, points });
  }
  return series;
}

/** Per-trial (borda, rsd) pairs for each noise level of the spread rows. */
export function extractScatterPanels(rows: ResultRow[], experiment: string): ScatterPanel[] {
  const relevant = rows.filter((r) => r.experiment === experiment && r.status === "ok");
  if (relevant.length === 0) {
    throw new MissingDataError(
      `no usable rows for experiment ${JSON.stringify(experiment)} in the CSV`,
    );
  }
  const byNoise = new Map<number, Map<number, { borda?: number; rsd?: number }>>();
  for (const row of relevant) {
    if (row.recoveredFraction === null) continue;
    if (row.rule !== "borda" && row.rule !== "rsd") continue;
    let trials = byNoise.get(row.noiseLevel);
    if (!trials) {
      trials = new Map();
      byNoise.set(row.noiseLevel, trials);
    }
    let pair = trials.get(row.trialIndex);
    if (!pair) {
      pair = {};
      trials.set(row.trialIndex, pair);
    }
    pair[row.rule] = row.recoveredFraction;
  }
  const panels: ScatterPanel[] = [];
  // high noise first, matching the published panel order
  const levels = [...byNoise.keys()].sort((a, b) => b - a);
  for (const level of levels) {
    const points: { x: number; y: number }[] = [];
    const trials = [...byNoise.get(level)!.entries()].sort((a, b) => a[0] - b[0]);
    for (const [, pair] of trials) {
      if (pair.borda !== undefined && pair.rsd !== undefined) {
        points.push({ x: pair.borda, y: pair.rsd });
      }
    }
    if (points.length > 0) {
      panels.push({ noiseLevel: level, points });
    }
  }
  if (panels.length < 2) {
    throw new MissingDataError(
      `experiment ${experiment} needs paired borda/rsd trials at two noise ` +
        `levels; found ${panels.length}`,
    );
  }
  return panels;
}
