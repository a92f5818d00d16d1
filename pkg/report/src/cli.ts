import { readFileSync } from "fs";

import { validateSpec } from "./figures.js";
import { renderFigure } from "./render.js";

function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: node dist/cli.js <figure-spec.json>");
    return 2;
  }
  let spec;
  try {
    spec = validateSpec(JSON.parse(readFileSync(argv[0], "utf8")));
  } catch (err) {
    console.error(`invalid figure spec: ${(err as Error).message}`);
    return 2;
  }
  try {
    for (const fig of spec.figures) {
      const out = renderFigure(fig);
      console.log(`wrote ${out}`);
    }
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
