/** Typed view of the benchmark records CSV.
 *
 * Only the columns the panels consume are required; extra columns pass
 * through unharmed so the schema can grow. Parsing never recomputes any
 * physics, it just reads the fields the benchmark harness wrote.
 */

import { parseCsv } from "./csv";

export interface BenchRecord {
  nParticles: number;
  temperature: number;
  steps: number;
  backend: string;
  workerCount: number;
  wallTimeS: number;
  forceTimeFraction: number;
  nlistTimeFraction: number;
  rebuildCount: number;
}

const REQUIRED: Array<[string, keyof BenchRecord, "int" | "float" | "str"]> = [
  ["n_particles", "nParticles", "int"],
  ["temperature", "temperature", "float"],
  ["steps", "steps", "int"],
  ["backend", "backend", "str"],
  ["worker_count", "workerCount", "int"],
  ["wall_time_s", "wallTimeS", "float"],
  ["force_time_fraction", "forceTimeFraction", "float"],
  ["nlist_time_fraction", "nlistTimeFraction", "float"],
  ["rebuild_count", "rebuildCount", "int"],
];

export function parseRecords(text: string): BenchRecord[] {
  const { header, rows } = parseCsv(text);
  if (header.length === 0 || rows.length === 0) {
    throw new Error("no records");
  }
  const indexOf = new Map(header.map((name, i) => [name, i] as const));
  for (const [column] of REQUIRED) {
    if (!indexOf.has(column)) {
      throw new Error(`records CSV is missing column "${column}"`);
    }
  }
  return rows.map((row, rowIndex) => {
    const record: Partial<Record<keyof BenchRecord, number | string>> = {};
    for (const [column, field, kind] of REQUIRED) {
      const raw = row[indexOf.get(column)!];
      if (raw === undefined) {
        throw new Error(
          `row ${rowIndex + 1} is missing a value for "${column}"`);
      }
      if (kind === "str") {
        record[field] = raw;
        continue;
      }
      const value = kind === "int" ? parseInt(raw, 10) : parseFloat(raw);
      if (Number.isNaN(value)) {
        throw new Error(
          `row ${rowIndex + 1} has a non-numeric "${column}": ${raw}`);
      }
      record[field] = value;
    }
    return record as unknown as BenchRecord;
  });
}
