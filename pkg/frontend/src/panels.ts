/** The three chart panels derived from a benchmark records CSV.
 *
 * - speedup: wall-time ratio vs worker count, one series per baseline
 *   (the sequential run and the single-worker parallel run).
 * - efficiency: speedup divided by worker count under both baselines,
 *   with the ideal line at 1.0.
 * - temperature: rebuild rate per 1,000 steps on the left axis and the
 *   force/neighbor-list wall-time fractions on the right axis, against
 *   the run temperature.
 *
 * Nothing here recomputes physics; every y value is a ratio of fields
 * already present in the records.
 */

import { BenchRecord } from "./records";
import { ChartSpec, Series, renderChart } from "./svg";

export const PANELS = ["speedup", "efficiency", "temperature"] as const;
export type PanelName = (typeof PANELS)[number];

const COLOR_A = "#4361ee";
const COLOR_B = "#e63946";
const COLOR_C = "#2d6a4f";
const COLOR_REF = "#888888";

function describe(records: BenchRecord[]): string {
  const n = records[0]!.nParticles;
  const steps = records[0]!.steps;
  return `${records.length} runs at n=${n}, ${steps} steps each`;
}

function sequentialBaseline(records: BenchRecord[]): BenchRecord {
  const found = records.find((r) => r.backend === "sequential");
  if (!found) throw new Error("no sequential baseline record in the CSV");
  return found;
}

function singleWorkerBaseline(records: BenchRecord[]): BenchRecord {
  const found = records.find(
    (r) => r.backend === "parallel" && r.workerCount === 1);
  if (!found) throw new Error("no single-worker parallel record in the CSV");
  return found;
}

function workerTicks(records: BenchRecord[]): number[] {
  return [...new Set(records.map((r) => r.workerCount))].sort((a, b) => a - b);
}

export function speedupPanel(records: BenchRecord[]): string {
  const seq = sequentialBaseline(records);
  const single = singleWorkerBaseline(records);
  const vsSequential: Series = {
    label: "vs sequential baseline",
    color: COLOR_A,
    points: records.map((r) => ({
      x: r.workerCount, y: seq.wallTimeS / r.wallTimeS })),
  };
  const vsSingle: Series = {
    label: "vs 1-worker parallel",
    color: COLOR_B,
    points: records.map((r) => ({
      x: r.workerCount, y: single.wallTimeS / r.wallTimeS })),
  };
  const spec: ChartSpec = {
    title: "Speedup vs worker count",
    subtitle: describe(records),
    xLabel: "workers",
    yLabel: "speedup",
    series: [vsSequential, vsSingle],
    xTicks: workerTicks(records),
    yMin: 0,
  };
  return renderChart(spec);
}

export function efficiencyPanel(records: BenchRecord[]): string {
  const seq = sequentialBaseline(records);
  const single = singleWorkerBaseline(records);
  const parallel = records.filter((r) => r.backend === "parallel");
  const vsSequential: Series = {
    label: "vs sequential baseline",
    color: COLOR_A,
    points: parallel.map((r) => ({
      x: r.workerCount,
      y: seq.wallTimeS / r.wallTimeS / r.workerCount,
    })),
  };
  const vsSingle: Series = {
    label: "vs 1-worker parallel",
    color: COLOR_B,
    points: parallel.map((r) => ({
      x: r.workerCount,
      y: single.wallTimeS / r.wallTimeS / r.workerCount,
    })),
  };
  const spec: ChartSpec = {
    title: "Parallel efficiency vs worker count",
    subtitle: describe(records),
    xLabel: "workers",
    yLabel: "efficiency",
    series: [vsSequential, vsSingle],
    refLines: [{ value: 1.0, label: "ideal", color: COLOR_REF }],
    xTicks: workerTicks(parallel),
    yMin: 0,
  };
  return renderChart(spec);
}

export function temperaturePanel(records: BenchRecord[]): string {
  const byTemperature = [...records].sort(
    (a, b) => a.temperature - b.temperature);
  const rebuilds: Series = {
    label: "rebuilds per 1000 steps",
    color: COLOR_A,
    points: byTemperature.map((r) => ({
      x: r.temperature, y: (r.rebuildCount / r.steps) * 1000 })),
  };
  const forceShare: Series = {
    label: "force fraction",
    color: COLOR_B,
    right: true,
    points: byTemperature.map((r) => ({
      x: r.temperature, y: r.forceTimeFraction })),
  };
  const nlistShare: Series = {
    label: "neighbor-list fraction",
    color: COLOR_C,
    right: true,
    dash: "4,3",
    points: byTemperature.map((r) => ({
      x: r.temperature, y: r.nlistTimeFraction })),
  };
  const spec: ChartSpec = {
    title: "Rebuild rate and phase shares vs temperature",
    subtitle: describe(records),
    xLabel: "temperature",
    yLabel: "rebuilds per 1000 steps",
    rightYLabel: "fraction of wall time",
    series: [rebuilds, forceShare, nlistShare],
    xTicks: [...new Set(byTemperature.map((r) => r.temperature))],
    yMin: 0,
    rightYMin: 0,
    rightYMax: 1,
  };
  return renderChart(spec);
}

export function renderPanel(panel: PanelName, records: BenchRecord[]): string {
  switch (panel) {
    case "speedup":
      return speedupPanel(records);
    case "efficiency":
      return efficiencyPanel(records);
    case "temperature":
      return temperaturePanel(records);
  }
}
