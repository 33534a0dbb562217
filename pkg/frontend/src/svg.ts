/** Hand-rolled SVG line charts.
 *
 * Everything is assembled from template literals so the output depends only
 * on the numbers that go in: no timestamps, no environment lookups, no
 * randomness. The same data renders to the byte-identical file everywhere,
 * which is what the golden tests rely on.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  points: Point[];
  dash?: string;
  /** plot against the right-hand axis (when the chart declares one) */
  right?: boolean;
}

export interface RefLine {
  value: number;
  label: string;
  color: string;
  dash?: string;
}

export interface ChartSpec {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLines?: RefLine[];
  rightYLabel?: string;
  /** explicit x tick positions; defaults to nice ticks over the data range */
  xTicks?: number[];
  yMin?: number;
  yMax?: number;
  rightYMin?: number;
  rightYMax?: number;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function niceTicks(min: number, max: number, count: number): number[] {
  if (min === max) return [min];
  const rough = (max - min) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough)!;
  const ticks: number[] = [];
  const first = Math.ceil(min / step - 1e-9);
  const last = Math.floor(max / step + 1e-9);
  for (let i = first; i <= last; i++) {
    // multiples of the step, cleaned so 3 * 0.2 prints as 0.6
    ticks.push(parseFloat((i * step).toPrecision(12)));
  }
  return ticks;
}

export function fmtTick(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const s = v.toFixed(3).replace(/0+$/, "").replace(/\.$/, "");
  return s === "-0" ? "0" : s;
}

const W = 640;
const H = 360;
const FONT = "Helvetica, Arial, sans-serif";

export function renderChart(spec: ChartSpec): string {
  const refLines = spec.refLines ?? [];
  const hasRight = spec.series.some((s) => s.right) && spec.rightYLabel;
  const ml = 62;
  const mr = hasRight ? 62 : 24;
  const mt = 46;
  const mb = 52;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  const leftSeries = spec.series.filter((s) => !s.right);
  const rightSeries = spec.series.filter((s) => s.right);

  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;

  const leftVals = leftSeries.flatMap((s) => s.points.map((p) => p.y));
  const refVals = refLines.map((r) => r.value);
  const yMin = spec.yMin ?? Math.min(...leftVals, ...refVals, 0);
  const yMax = spec.yMax ?? Math.max(...leftVals, ...refVals) * 1.08;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;

  let rYOf = (_v: number) => mt + ph;
  let rYMin = 0;
  let rYMax = 1;
  if (hasRight) {
    const rightVals = rightSeries.flatMap((s) => s.points.map((p) => p.y));
    rYMin = spec.rightYMin ?? Math.min(...rightVals, 0);
    rYMax = spec.rightYMax ?? Math.max(...rightVals) * 1.08;
    rYOf = (v: number) => mt + ph - ((v - rYMin) / (rYMax - rYMin || 1)) * ph;
  }

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="${FONT}">\n`;
  s += `<rect width="${W}" height="${H}" fill="#ffffff"/>\n`;
  s += `<text x="${ml}" y="20" font-size="14" font-weight="600" fill="#222">${escapeXml(spec.title)}</text>\n`;
  if (spec.subtitle) {
    s += `<text x="${ml}" y="36" font-size="10" fill="#888">${escapeXml(spec.subtitle)}</text>\n`;
  }

  // grid and left axis ticks
  const yTicks = niceTicks(yMin, yMax, 5);
  for (const v of yTicks) {
    const y = yOf(v).toFixed(1);
    s += `<line x1="${ml}" y1="${y}" x2="${ml + pw}" y2="${y}" stroke="#eeeeee" stroke-width="1"/>\n`;
    s += `<text x="${ml - 7}" y="${(yOf(v) + 3.5).toFixed(1)}" text-anchor="end" font-size="10" fill="#555">${fmtTick(v)}</text>\n`;
  }

  // x ticks
  const xTicks = spec.xTicks ?? niceTicks(xMin, xMax, 6);
  for (const v of xTicks) {
    const x = xOf(v).toFixed(1);
    s += `<line x1="${x}" y1="${mt + ph}" x2="${x}" y2="${mt + ph + 4}" stroke="#333333" stroke-width="1"/>\n`;
    s += `<text x="${x}" y="${mt + ph + 16}" text-anchor="middle" font-size="10" fill="#555">${fmtTick(v)}</text>\n`;
  }

  // reference lines
  for (const ref of refLines) {
    const y = yOf(ref.value).toFixed(1);
    s += `<line x1="${ml}" y1="${y}" x2="${ml + pw}" y2="${y}" stroke="${ref.color}" stroke-width="1" stroke-dasharray="${ref.dash ?? "6,3"}"/>\n`;
  }

  // data series: polyline plus circle markers per point
  const drawSeries = (sr: Series, yProject: (v: number) => number) => {
    const sorted = [...sr.points].sort((a, b) => a.x - b.x || a.y - b.y);
    const coords = sorted.map(
      (p) => `${xOf(p.x).toFixed(1)},${yProject(p.y).toFixed(1)}`);
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    s += `<polyline fill="none" stroke="${sr.color}" stroke-width="1.5"${dash} points="${coords.join(" ")}"/>\n`;
    for (const c of coords) {
      const [cx, cy] = c.split(",");
      s += `<circle cx="${cx}" cy="${cy}" r="2.5" fill="${sr.color}"/>\n`;
    }
  };
  for (const sr of leftSeries) drawSeries(sr, yOf);
  for (const sr of rightSeries) drawSeries(sr, rYOf);

  // axes frame
  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333333" stroke-width="1"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333333" stroke-width="1"/>\n`;
  s += `<text x="${ml + pw / 2}" y="${H - 10}" text-anchor="middle" font-size="11" fill="#333">${escapeXml(spec.xLabel)}</text>\n`;
  s += `<text x="16" y="${mt + ph / 2}" text-anchor="middle" font-size="11" fill="#333" transform="rotate(-90,16,${mt + ph / 2})">${escapeXml(spec.yLabel)}</text>\n`;

  // right axis
  if (hasRight) {
    s += `<line x1="${ml + pw}" y1="${mt}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333333" stroke-width="1"/>\n`;
    for (const v of niceTicks(rYMin, rYMax, 5)) {
      const y = rYOf(v).toFixed(1);
      s += `<line x1="${ml + pw}" y1="${y}" x2="${ml + pw + 4}" y2="${y}" stroke="#333333" stroke-width="1"/>\n`;
      s += `<text x="${ml + pw + 7}" y="${(rYOf(v) + 3.5).toFixed(1)}" text-anchor="start" font-size="10" fill="#555">${fmtTick(v)}</text>\n`;
    }
    s += `<text x="${W - 14}" y="${mt + ph / 2}" text-anchor="middle" font-size="11" fill="#333" transform="rotate(90,${W - 14},${mt + ph / 2})">${escapeXml(spec.rightYLabel!)}</text>\n`;
  }

  // legend
  const entries = [
    ...spec.series.map((sr) => ({
      label: sr.label, color: sr.color, dash: sr.dash })),
    ...refLines.map((r) => ({
      label: r.label, color: r.color, dash: r.dash ?? "6,3" })),
  ];
  const legendW = Math.max(...entries.map((e) => e.label.length)) * 5.4 + 30;
  const lx = ml + pw - legendW - 6;
  const ly = mt + 8;
  s += `<rect x="${lx.toFixed(1)}" y="${ly - 6}" width="${legendW.toFixed(1)}" height="${entries.length * 14 + 6}" rx="3" fill="#ffffff" fill-opacity="0.85" stroke="#dddddd" stroke-width="0.5"/>\n`;
  entries.forEach((e, i) => {
    const yy = ly + 4 + i * 14;
    const dash = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    s += `<line x1="${(lx + 6).toFixed(1)}" y1="${yy}" x2="${(lx + 22).toFixed(1)}" y2="${yy}" stroke="${e.color}" stroke-width="1.5"${dash}/>\n`;
    s += `<text x="${(lx + 27).toFixed(1)}" y="${yy + 3.5}" font-size="10" fill="#444">${escapeXml(e.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
