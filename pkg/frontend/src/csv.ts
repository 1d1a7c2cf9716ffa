/** CSV loading with schema validation for the harness outputs. */

import { readFileSync } from "node:fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

/**
 * Parse a harness CSV: optional leading `#` comment lines, a header row
 * naming every column, numeric data rows.
 */
export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0 && !line.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(
        `row has ${parts.length} fields, expected ${columns.length}: ${line}`,
      );
    }
    rows.push(parts.map((p) => Number(p)));
  }
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  return { columns, rows };
}

export function loadCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Return the named columns as arrays, or fail naming the missing one. */
export function requireColumns(table: Table, names: string[]): number[][] {
  return names.map((name) => {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(
        `missing column '${name}' (have: ${table.columns.join(", ")})`,
      );
    }
    return table.rows.map((row) => row[idx]);
  });
}
