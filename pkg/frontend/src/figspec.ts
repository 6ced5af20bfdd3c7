/**
 * Figure specs are small JSON files: which CSVs to read, which columns to
 * draw per panel, the panel grid, axis labels, and the output image path.
 * CSV paths resolve relative to the spec file's directory.
 */
import { readFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

export interface PanelSpec {
  csv: string;
  columns: string[];
  title: string;
}

export interface FigureSpec {
  output: string;
  layout: { rows: number; cols: number };
  xlabel: string;
  ylabel: string;
  panels: PanelSpec[];
  width: number;
  height: number;
}

export class FigureSpecError extends Error {}

function asString(value: unknown, what: string): string {
  if (typeof value !== "string" || value.length === 0) {
    throw new FigureSpecError(`${what} must be a non-empty string`);
  }
  return value;
}

function asPositiveInt(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isInteger(value) || value < 1) {
    throw new FigureSpecError(`${what} must be a positive integer`);
  }
  return value;
}

export function loadFigureSpec(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new FigureSpecError(`cannot load spec ${path}: ${(err as Error).message}`);
  }
  const obj = raw as Record<string, unknown>;
  const base = dirname(resolve(path));

  const layoutRaw = (obj.layout ?? {}) as Record<string, unknown>;
  const layout = {
    rows: asPositiveInt(layoutRaw.rows, "layout.rows"),
    cols: asPositiveInt(layoutRaw.cols, "layout.cols"),
  };
  const panelsRaw = obj.panels;
  if (!Array.isArray(panelsRaw) || panelsRaw.length === 0) {
    throw new FigureSpecError("spec needs a non-empty panels array");
  }
  if (panelsRaw.length > layout.rows * layout.cols) {
    throw new FigureSpecError(
      `${panelsRaw.length} panels do not fit a ${layout.rows}x${layout.cols} grid`);
  }
  const panels = panelsRaw.map((p, i) => {
    const panel = p as Record<string, unknown>;
    const columns = panel.columns;
    if (!Array.isArray(columns) || columns.length === 0) {
      throw new FigureSpecError(`panel ${i}: columns must be a non-empty array`);
    }
    return {
      csv: resolve(base, asString(panel.csv, `panel ${i}: csv`)),
      columns: columns.map((c, j) => asString(c, `panel ${i}: columns[${j}]`)),
      title: asString(panel.title, `panel ${i}: title`),
    };
  });
  const output = resolve(base, asString(obj.output, "output"));
  if (!output.endsWith(".svg")) {
    throw new FigureSpecError(`output must be an .svg path, got ${obj.output}`);
  }
  return {
    output,
    layout,
    xlabel: asString(obj.xlabel ?? "time (ns)", "xlabel"),
    ylabel: asString(obj.ylabel ?? "value", "ylabel"),
    panels,
    width: typeof obj.width === "number" ? obj.width : 420 * layout.cols,
    height: typeof obj.height === "number" ? obj.height : 320 * layout.rows,
  };
}
