import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { efficiencyPanel, renderPanel, speedupPanel,
         temperaturePanel } from "../src/panels";
import { parseRecords } from "../src/records";
import { fmtTick, niceTicks } from "../src/svg";

const SWEEP = parseRecords(readFileSync("test/data/sweep6.csv", "utf-8"));

/** All data polylines (the legend draws plain lines, not polylines). */
function polylines(svg: string): string[][] {
  return [...svg.matchAll(/<polyline[^>]*points="([^"]*)"/g)].map((m) =>
    m[1]!.split(" "));
}

function csvFor(rows: Array<Record<string, string | number>>): string {
  const columns = ["n_particles", "temperature", "steps", "backend",
    "worker_count", "wall_time_s", "force_time_fraction",
    "nlist_time_fraction", "rebuild_count"];
  const body = rows
    .map((row) => columns.map((c) => String(row[c])).join(","))
    .join("\n");
  return columns.join(",") + "\n" + body + "\n";
}

function syntheticRun(extra: Record<string, string | number>) {
  return { n_particles: 256, temperature: 1.5, steps: 1000,
           wall_time_s: 6, force_time_fraction: 0.6,
           nlist_time_fraction: 0.1, rebuild_count: 30, ...extra };
}

describe("speedup panel", () => {
  it("draws two series with one point per record", () => {
    const lines = polylines(speedupPanel(SWEEP));
    expect(lines).toHaveLength(2);
    expect(lines[0]).toHaveLength(6);
    expect(lines[1]).toHaveLength(6);
  });

  it("requires a sequential baseline", () => {
    expect(() => speedupPanel(SWEEP.filter((r) => r.backend !== "sequential")))
      .toThrow("sequential baseline");
  });

  it("requires a single-worker parallel record", () => {
    const only = SWEEP.filter(
      (r) => r.backend === "sequential" || r.workerCount > 1);
    expect(() => speedupPanel(only)).toThrow("single-worker");
  });
});

describe("efficiency panel", () => {
  it("is constant 1.0 for perfectly linear scaling", () => {
    const records = parseRecords(csvFor([
      syntheticRun({ backend: "sequential", worker_count: 1 }),
      syntheticRun({ backend: "parallel", worker_count: 1, wall_time_s: 6 }),
      syntheticRun({ backend: "parallel", worker_count: 2, wall_time_s: 3 }),
      syntheticRun({ backend: "parallel", worker_count: 3, wall_time_s: 2 }),
    ]));
    const svg = efficiencyPanel(records);
    const lines = polylines(svg);
    expect(lines).toHaveLength(2);
    // every efficiency point sits on the ideal line at y(1.0)
    const idealY = svg.match(
      /<line[^>]*y1="([\d.]+)"[^>]*stroke="#888888"/)![1];
    for (const series of lines) {
      for (const coord of series) {
        expect(coord.split(",")[1]).toBe(idealY);
      }
    }
  });

  it("plots parallel records only", () => {
    const lines = polylines(efficiencyPanel(SWEEP));
    expect(lines[0]).toHaveLength(5);
    expect(lines[1]).toHaveLength(5);
  });
});

describe("temperature panel", () => {
  it("draws rebuild rate on the left and both time fractions on the right",
     () => {
    const records = parseRecords(csvFor([
      syntheticRun({ backend: "sequential", worker_count: 1,
                     temperature: 2, rebuild_count: 400 }),
      syntheticRun({ backend: "sequential", worker_count: 1,
                     temperature: 3, rebuild_count: 500 }),
      syntheticRun({ backend: "sequential", worker_count: 1,
                     temperature: 4, rebuild_count: 600 }),
    ]));
    const svg = temperaturePanel(records);
    expect(polylines(svg)).toHaveLength(3);
    expect(svg).toContain("rebuilds per 1000 steps");
    expect(svg).toContain("fraction of wall time");
    expect(svg).toContain('rotate(90');
  });

  it("orders points by temperature", () => {
    const records = parseRecords(csvFor([
      syntheticRun({ backend: "sequential", worker_count: 1,
                     temperature: 4, rebuild_count: 600 }),
      syntheticRun({ backend: "sequential", worker_count: 1,
                     temperature: 2, rebuild_count: 400 }),
    ]));
    const lines = polylines(temperaturePanel(records));
    const xs = lines[0]!.map((c) => parseFloat(c.split(",")[0]!));
    expect(xs[0]).toBeLessThan(xs[1]!);
  });
});

describe("rendering", () => {
  it("is deterministic", () => {
    for (const panel of ["speedup", "efficiency", "temperature"] as const) {
      expect(renderPanel(panel, SWEEP)).toBe(renderPanel(panel, SWEEP));
    }
  });

  it("contains no timestamps or environment content", () => {
    const svg = speedupPanel(SWEEP);
    expect(svg).not.toMatch(/\b20\d\d-\d\d-\d\d\b/);
    expect(svg).not.toContain(process.cwd());
  });
});

describe("axis helpers", () => {
  it("produces snapped, printable ticks", () => {
    expect(niceTicks(0, 1, 5)).toEqual([0, 0.2, 0.4, 0.6, 0.8, 1]);
    expect(niceTicks(0, 1, 5).map(fmtTick)).toEqual(
      ["0", "0.2", "0.4", "0.6", "0.8", "1"]);
    expect(niceTicks(1, 5, 4)).toEqual([1, 2, 3, 4, 5]);
  });

  it("handles degenerate ranges", () => {
    expect(niceTicks(1.5, 1.5, 5)).toEqual([1.5]);
  });
});
