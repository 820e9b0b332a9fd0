#!/usr/bin/env node
/**
 * plot convergence --dir SUITE_DIR --out FIG.png [--title TEXT]
 * plot fields --snapshot FILE [--snapshot FILE2 ...] --out FIG.png
 *
 * Reads only the simulator's documented file formats (timeseries.csv and
 * snapshot_*.dat); no in-process coupling to the solver.
 */

import { extractConvergence } from "./timeseries.js";
import { readSnapshot } from "./snapshot.js";
import { convergenceFigure, fieldsFigure } from "./figures.js";
import { writeFigure } from "./render.js";

function parseArgs(argv: string[]): { cmd: string; flags: Record<string, string[]> } {
  const cmd = argv[0] ?? "";
  const flags: Record<string, string[]> = {};
  for (let i = 1; i < argv.length; i++) {
    const a = argv[i];
    if (!a.startsWith("--")) throw new Error(`unexpected argument ${a}`);
    const key = a.slice(2);
    const val = argv[++i];
    if (val === undefined) throw new Error(`flag --${key} needs a value`);
    (flags[key] ??= []).push(val);
  }
  return { cmd, flags };
}

function need(flags: Record<string, string[]>, key: string): string {
  const v = flags[key];
  if (!v || v.length === 0) throw new Error(`missing required flag --${key}`);
  return v[0];
}

export async function main(argv: string[]): Promise<number> {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  const { cmd, flags } = parsed;
  try {
    if (cmd === "convergence") {
      const data = extractConvergence(need(flags, "dir"));
      const svg = convergenceFigure(data, flags["title"]?.[0] ?? "");
      await writeFigure(svg, need(flags, "out"));
      return 0;
    }
    if (cmd === "fields") {
      const snaps = (flags["snapshot"] ?? []).map(readSnapshot);
      if (snaps.length === 0) throw new Error("missing required flag --snapshot");
      const svg = fieldsFigure(snaps);
      await writeFigure(svg, need(flags, "out"));
      return 0;
    }
    console.error(`usage: plot convergence --dir SUITE_DIR --out FIG.png\n` +
      `       plot fields --snapshot FILE [--snapshot FILE2] --out FIG.png`);
    return 2;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
