import { FigureSpec, FigureSpecError, loadFigureSpec } from "./figspec.js";
import { CsvSchemaError } from "./csv.js";

export function parseSpecArg(argv: string[]): FigureSpec {
  const idx = argv.indexOf("--spec");
  if (idx === -1 || idx + 1 >= argv.length) {
    throw new FigureSpecError("usage: --spec PATH (a figure-spec JSON file)");
  }
  return loadFigureSpec(argv[idx + 1]);
}

/** Shared driver: schema problems print one clear line and exit nonzero. */
export function runFigureCli(argv: string[], body: (argv: string[]) => void): void {
  try {
    body(argv);
  } catch (err) {
    if (err instanceof CsvSchemaError || err instanceof FigureSpecError) {
      console.error(`error: ${err.message}`);
      process.exit(2);
    }
    throw err;
  }
}
