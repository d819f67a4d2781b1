#!/usr/bin/env node
/** CLI: plot --figure fig2|fig3 --in results.csv --out figure.png */

import { pathToFileURL } from "node:url";

import { CsvFormatError } from "./csv.js";
import { MissingDataError } from "./data.js";
import { FigureName, render } from "./plot.js";

const USAGE = "usage: peergrade-plot --figure fig2|fig3 --in results.csv --out figure.png";

export function parseArgs(argv: string[]): { figure: FigureName; input: string; output: string } {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    opts.set(flag.slice(2), value);
  }
  const figure = opts.get("figure");
  const input = opts.get("in");
  const output = opts.get("out");
  if (!figure || !input || !output) {
    throw new Error(USAGE);
  }
  if (figure !== "fig2" && figure !== "fig3") {
    throw new Error(`unknown figure ${JSON.stringify(figure)}; expected fig2 or fig3`);
  }
  return { figure, input, output };
}

export function main(argv: string[]): number {
  let spec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    render({ figure: spec.figure, input: spec.input, output: spec.output });
  } catch (err) {
    if (err instanceof CsvFormatError || err instanceof MissingDataError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${spec.figure} to ${spec.output}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
