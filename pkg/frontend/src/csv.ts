/**
 * Strict reader for simulation CSVs (UTF-8, comma-separated, one header
 * row, numeric body). These scripts are read-only consumers: any schema
 * drift fails loudly instead of being papered over.
 */
import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface NumericTable {
  path: string;
  header: string[];
  /** column name -> values, all columns equal length */
  columns: Map<string, number[]>;
  rowCount: number;
}

export class CsvSchemaError extends Error {}

export function loadCsv(path: string): NumericTable {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvSchemaError(`cannot read CSV ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { delimiter: "," });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvSchemaError(`${path}: malformed CSV (${first.message} at row ${first.row})`);
  }
  const rows = parsed.data;
  if (rows.length === 0 || rows[0].length === 0 || rows[0][0] === "") {
    throw new CsvSchemaError(`${path}: empty CSV`);
  }
  const header = rows[0];
  const body = rows.slice(1);
  if (body.length === 0) {
    throw new CsvSchemaError(`${path}: no data rows below the header`);
  }
  const columns = new Map<string, number[]>(header.map((name) => [name, []]));
  body.forEach((row, i) => {
    if (row.length !== header.length) {
      throw new CsvSchemaError(
        `${path}: row ${i + 2} has ${row.length} fields, header has ${header.length}`);
    }
    row.forEach((token, j) => {
      const value = Number(token);
      if (!Number.isFinite(value)) {
        throw new CsvSchemaError(
          `${path}: row ${i + 2}, column "${header[j]}": ${JSON.stringify(token)} is not a finite number`);
      }
      columns.get(header[j])!.push(value);
    });
  });
  return { path, header, columns, rowCount: body.length };
}

/** Column accessor that names the offender on schema drift. */
export function requireColumn(table: NumericTable, name: string): number[] {
  const values = table.columns.get(name);
  if (values === undefined) {
    throw new CsvSchemaError(
      `column "${name}" not found in ${table.path} (header: ${table.header.join(",")})`);
  }
  return values;
}
