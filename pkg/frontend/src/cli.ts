#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FigureKind, plot } from "./figure.js";

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .scriptName("snapmem-plot")
      .command(
        "plot",
        "render a harness CSV into a multi-panel SVG figure",
        (cmd) =>
          cmd
            .option("kind", {
              choices: ["err-sweep", "deviation"] as const,
              demandOption: true,
              describe: "figure kind",
            })
            .option("in", {
              type: "string",
              demandOption: true,
              describe: "input CSV path",
            })
            .option("out", {
              type: "string",
              demandOption: true,
              describe: "output image path",
            })
            .option("format", {
              type: "string",
              default: "svg",
              describe: "output format",
            }),
        (args) => {
          plot({
            kind: args.kind as FigureKind,
            input: args.in,
            output: args.out,
            format: args.format as "svg",
          });
        },
      )
      .demandCommand(1)
      .strict()
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parseAsync();
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
