/**
 * Render a multi-panel coordinate-trajectory figure.
 *
 *   node dist/trajectory-figure.js --spec figspecs/fig1.json
 *
 * The spec JSON names the trajectory CSVs (as written by `zeno simulate`),
 * the columns each panel draws, the panel grid, and the output SVG path.
 * Exits nonzero naming the offending column/file on any schema mismatch.
 */
import { parseSpecArg, runFigureCli } from "./cli-common.js";
import { renderFigureToFile } from "./render.js";

runFigureCli(process.argv.slice(2), (argv) => {
  const spec = parseSpecArg(argv);
  const out = renderFigureToFile(spec);
  console.log(`wrote ${out}`);
});
