/**
 * Reader for the harness results CSV.
 *
 * The file is comma-separated with a fixed header; fields never contain
 * quotes or embedded commas. `recovered_fraction` is blank on infeasible
 * rows.
 */

export const REQUIRED_COLUMNS = [
  "experiment",
  "graph_family",
  "n",
  "k",
  "noise_level",
  "rule",
  "trial_index",
  "trial_seed",
  "recovered_fraction",
  "status",
] as const;

export interface ResultRow {
  experiment: string;
  graphFamily: string;
  n: number;
  k: number;
  noiseLevel: number;
  rule: string;
  trialIndex: number;
  recoveredFraction: number | null;
  status: string;
}

export class CsvFormatError extends Error {}

export function parseResultsCsv(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError("results CSV is empty (no header line)");
  }
  const header = lines[0].split(",");
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvFormatError(
      `results CSV is missing required columns: ${missing.join(", ")} ` +
        `(found: ${header.join(", ")})`,
    );
  }
  const idx = new Map(header.map((name, i) => [name, i] as const));
  const col = (fields: string[], name: string): string =>
    fields[idx.get(name)!] ?? "";

  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new CsvFormatError(
        `row ${i + 1} has ${fields.length} fields, expected ${header.length}`,
      );
    }
    const fracText = col(fields, "recovered_fraction");
    const frac = fracText === "" ? null : Number(fracText);
    if (frac !== null && !Number.isFinite(frac)) {
      throw new CsvFormatError(
        `row ${i + 1}: bad recovered_fraction ${JSON.stringify(fracText)}`,
      );
    }
    rows.push({
      experiment: col(fields, "experiment"),
      graphFamily: col(fields, "graph_family"),
      n: Number(col(fields, "n")),
      k: Number(col(fields, "k")),
      noiseLevel: Number(col(fields, "noise_level")),
      rule: col(fields, "rule"),
      trialIndex: Number(col(fields, "trial_index")),
      recoveredFraction: frac,
      status: col(fields, "status"),
    });
  }
  if (rows.length === 0) {
    throw new CsvFormatError("results CSV holds a header but no data rows");
  }
  return rows;
}
