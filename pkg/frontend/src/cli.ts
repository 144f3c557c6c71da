#!/usr/bin/env node
import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { loadManifest } from "./data.js";
import { SchemaMismatch } from "./errors.js";
import { FigureKind, renderFigure } from "./figures.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("ferrylink-figures")
    .option("in", { type: "string", demandOption: true, describe: "input CSV/JSON file" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("kind", {
      choices: ["staircase", "timeseries", "pareto"] as const,
      demandOption: true,
    })
    .option("x", { type: "string", describe: "x column (timeseries)" })
    .option("y", { type: "string", describe: "y column (timeseries)" })
    .option("title", { type: "string" })
    .option("meta", { type: "string", describe: "manifest.json for the footer" })
    .strict()
    .parse();

  try {
    const svg = renderFigure({
      kind: args.kind as FigureKind,
      input: args.in,
      xColumn: args.x,
      yColumn: args.y,
      title: args.title,
      provenance: args.meta ? loadManifest(args.meta) : undefined,
    });
    writeFileSync(args.out, svg);
    console.log(args.out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaMismatch) {
      console.error(JSON.stringify({ error: "SchemaMismatch", message: err.message }));
      return 2;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
