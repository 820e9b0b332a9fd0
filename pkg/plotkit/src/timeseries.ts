/**
 * Readers for the simulator's CSV outputs.
 *
 * timeseries.csv: header row then comma-separated floats; one row per
 * diagnostic sample. A convergence suite directory holds one <nx>x<ny>
 * subdirectory per mesh, each with its own timeseries.csv.
 */

import { readFileSync, readdirSync, existsSync } from "fs";
import path from "path";

export interface TimeSeries {
  columns: string[];
  /** column name -> values, row order preserved */
  data: Record<string, number[]>;
}

export const CONVERGENCE_COLUMNS = ["F_recon", "tracker", "cum_E3"] as const;

export interface ConvergenceData {
  /** mesh labels like "32x16", sorted coarse to fine */
  meshes: string[];
  t: Record<string, number[]>;
  panels: Record<string, Record<string, number[]>>;
}

export function parseTimeseriesText(text: string): TimeSeries {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) {
    throw new Error("timeseries has no data rows");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const data: Record<string, number[]> = {};
  for (const c of columns) data[c] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${i + 1}: expected ${columns.length} values, got ${parts.length}`);
    }
    for (let k = 0; k < columns.length; k++) {
      const v = Number(parts[k]);
      if (!Number.isFinite(v)) {
        throw new Error(`row ${i + 1}: bad number ${parts[k]!} in column ${columns[k]}`);
      }
      data[columns[k]].push(v);
    }
  }
  return { columns, data };
}

export function readTimeseries(file: string): TimeSeries {
  return parseTimeseriesText(readFileSync(file, "utf-8"));
}

function meshCells(label: string): number {
  const m = label.match(/^(\d+)x(\d+)$/);
  return m ? Number(m[1]) * Number(m[2]) : NaN;
}

export function discoverMeshes(suiteDir: string): string[] {
  const labels = readdirSync(suiteDir, { withFileTypes: true })
    .filter((e) => e.isDirectory() && /^\d+x\d+$/.test(e.name))
    .filter((e) => existsSync(path.join(suiteDir, e.name, "timeseries.csv")))
    .map((e) => e.name);
  if (labels.length === 0) {
    throw new Error(`no <nx>x<ny>/timeseries.csv found under ${suiteDir}`);
  }
  return labels.sort((a, b) => meshCells(a) - meshCells(b));
}

/**
 * Extract the three-panel convergence arrays (F_recon, tracker, cum_E3 vs t)
 * for every mesh of a suite directory. This is the plot's data layer; the
 * golden-file tests pin it.
 */
export function extractConvergence(suiteDir: string): ConvergenceData {
  const meshes = discoverMeshes(suiteDir);
  const t: Record<string, number[]> = {};
  const panels: Record<string, Record<string, number[]>> = {};
  for (const col of CONVERGENCE_COLUMNS) panels[col] = {};
  for (const mesh of meshes) {
    const ts = readTimeseries(path.join(suiteDir, mesh, "timeseries.csv"));
    for (const col of ["t", ...CONVERGENCE_COLUMNS]) {
      if (!(col in ts.data)) {
        throw new Error(`${mesh}/timeseries.csv is missing column ${col}`);
      }
    }
    t[mesh] = ts.data["t"];
    for (const col of CONVERGENCE_COLUMNS) panels[col][mesh] = ts.data[col];
  }
  return { meshes, t, panels };
}
