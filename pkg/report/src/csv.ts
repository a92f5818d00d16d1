import { readFileSync } from "fs";

export interface Table {
  header: string[];
  rows: number[][];
}

/** Parse a simulator CSV: one header row, numeric cells, no quoting. */
export function parseCsv(text: string, source = "<csv>"): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length === 0) {
    throw new Error(`${source}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(
        `${source}:${i + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    rows.push(cells.map(Number));
  }
  if (rows.length === 0) {
    throw new Error(`${source}: no data rows`);
  }
  return { header, rows };
}

export function loadCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseCsv(text, path);
}

export function column(table: Table, name: string, source = "<csv>"): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `${source}: column ${name} not in header [${table.header.join(", ")}]`,
    );
  }
  return table.rows.map((r) => r[idx]);
}
