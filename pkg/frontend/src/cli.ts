#!/usr/bin/env node
/** plot --input records.csv --panel speedup|efficiency|temperature --output fig.svg
 *
 * Reads a benchmark records CSV and writes one SVG chart. Exit codes:
 * 0 written, 1 bad usage or bad input (empty CSV, missing column).
 */

import { readFileSync, writeFileSync } from "node:fs";

import { PANELS, PanelName, renderPanel } from "./panels";
import { parseRecords } from "./records";

const USAGE =
  "usage: plot --input records.csv --panel " +
  "speedup|efficiency|temperature --output fig.svg";

interface Args {
  input: string;
  panel: PanelName;
  output: string;
}

function parseArgs(argv: string[]): Args {
  const values = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i]!;
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    values.set(flag.slice(2), value);
  }
  const input = values.get("input");
  const panel = values.get("panel");
  const output = values.get("output");
  if (!input || !panel || !output) {
    throw new Error(USAGE);
  }
  if (!(PANELS as readonly string[]).includes(panel)) {
    throw new Error(
      `unknown panel "${panel}" (expected ${PANELS.join(", ")})`);
  }
  if (!output.endsWith(".svg")) {
    throw new Error("only .svg output is supported");
  }
  return { input, panel: panel as PanelName, output };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  let text: string;
  try {
    text = readFileSync(args.input, "utf-8");
  } catch (err) {
    console.error(`cannot read ${args.input}: ${(err as Error).message}`);
    return 1;
  }
  try {
    const records = parseRecords(text);
    writeFileSync(args.output, renderPanel(args.panel, records));
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  console.log(args.output);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
