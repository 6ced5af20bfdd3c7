/**
 * Render a multi-panel entanglement-entropy figure with the ln 2 ceiling
 * drawn as a dashed guide on every panel.
 *
 *   node dist/entropy-figure.js --spec figspecs/fig3.json
 *
 * Expects entropy CSVs (time,S) as written by `zeno entropy`.
 */
import { parseSpecArg, runFigureCli } from "./cli-common.js";
import { ENTROPY_GUIDE, renderFigureToFile } from "./render.js";

runFigureCli(process.argv.slice(2), (argv) => {
  const spec = parseSpecArg(argv);
  const out = renderFigureToFile(spec, ENTROPY_GUIDE);
  console.log(`wrote ${out}`);
});
