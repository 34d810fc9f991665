#!/usr/bin/env node
/**
 * polariton-plot heatmap --grid grid.csv --overlay overlay.csv
 *     --out heatmap.png [--meta grid_meta.json] [--cell-w N] [--cell-h N]
 *
 * Renders a sweep grid to a PNG heatmap with the eigenmode overlay
 * drawn as polylines. When --meta is given, the grid axes are checked
 * against the recorded ones so mismatched file pairs fail loudly.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseGridCsv, parseOverlayCsv, parseGridMeta } from "./csv.js";
import { renderHeatmap } from "./heatmap.js";

const USAGE =
  "usage: polariton-plot heatmap --grid <grid.csv> --overlay <overlay.csv> " +
  "--out <file.png> [--meta <grid_meta.json>] [--cell-w N] [--cell-h N]";

interface Args {
  grid: string;
  overlay: string;
  out: string;
  meta?: string;
  cellW: number;
  cellH: number;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "heatmap") {
    throw new UsageError(`unknown command: ${argv[0] ?? "(none)"}`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new UsageError(`malformed option: ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  const required = (name: string): string => {
    const value = flags.get(name);
    if (value === undefined) {
      throw new UsageError(`missing required option --${name}`);
    }
    flags.delete(name);
    return value;
  };
  const integer = (name: string, fallback: number): number => {
    const raw = flags.get(name);
    if (raw === undefined) {
      return fallback;
    }
    flags.delete(name);
    const value = Number(raw);
    if (!Number.isInteger(value) || value < 1) {
      throw new UsageError(`--${name} must be a positive integer, got ${raw}`);
    }
    return value;
  };
  const args: Args = {
    grid: required("grid"),
    overlay: required("overlay"),
    out: required("out"),
    cellW: integer("cell-w", 8),
    cellH: integer("cell-h", 4),
  };
  if (flags.has("meta")) {
    args.meta = flags.get("meta");
    flags.delete("meta");
  }
  if (flags.size > 0) {
    throw new UsageError(`unknown option --${[...flags.keys()][0]}`);
  }
  return args;
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`${err.message}\n${USAGE}\n`);
      return 2;
    }
    throw err;
  }
  try {
    const grid = parseGridCsv(readFileSync(args.grid, "utf8"));
    const overlay = parseOverlayCsv(readFileSync(args.overlay, "utf8"));
    if (args.meta !== undefined) {
      const meta = parseGridMeta(readFileSync(args.meta, "utf8"));
      if (
        meta.sweepAxis.values.length !== grid.sweepValues.length ||
        meta.probeAxisGhz.length !== grid.probeGhz.length
      ) {
        throw new Error(
          `grid axes (${grid.sweepValues.length} x ${grid.probeGhz.length}) ` +
            `do not match metadata (${meta.sweepAxis.values.length} x ` +
            `${meta.probeAxisGhz.length})`,
        );
      }
    }
    const { png, layout } = renderHeatmap(grid, overlay, {
      cellW: args.cellW,
      cellH: args.cellH,
    });
    writeFileSync(args.out, png);
    process.stdout.write(`wrote ${args.out} (${layout.width}x${layout.height})\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (process.argv[1] && /cli\.[cm]?js$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
