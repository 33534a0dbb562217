/** Minimal CSV handling for the benchmark records format: comma-separated,
 * LF or CRLF line endings, no quoting (the writer never emits commas inside
 * fields). Returns the header row and the data rows separately. */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .replace(/\r\n/g, "\n")
    .split("\n")
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    return { header: [], rows: [] };
  }
  const header = lines[0]!.split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}
