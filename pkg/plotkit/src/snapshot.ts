/**
 * Reader for the simulator's field snapshots plus contour extraction.
 *
 * Snapshot format: "# field <name>", "# t <value>", "# nx <n> ny <n>",
 * "# xlo xhi ylo yhi <4 floats>", then ny lines of nx space-separated
 * values (rows run from ylo upward, values within a row from xlo).
 */

import { readFileSync } from "fs";

export interface FieldSnapshot {
  field: string;
  t: number;
  nx: number;
  ny: number;
  xlo: number;
  xhi: number;
  ylo: number;
  yhi: number;
  /** values[iy][ix], iy from ylo */
  values: number[][];
}

export function parseSnapshotText(text: string): FieldSnapshot {
  const lines = text.trim().split(/\r?\n/);
  const header: Record<string, string[]> = {};
  let k = 0;
  while (k < lines.length && lines[k].startsWith("#")) {
    const parts = lines[k].slice(1).trim().split(/\s+/);
    header[parts[0]] = parts.slice(1);
    k++;
  }
  for (const key of ["field", "t", "nx", "xlo"]) {
    if (!(key in header)) throw new Error(`malformed snapshot header: missing "# ${key}"`);
  }
  const nx = Number(header["nx"][0]);
  const ny = Number(header["nx"][2]);
  const [xlo, xhi, ylo, yhi] = header["xlo"].slice(-4).map(Number);
  const values: number[][] = [];
  for (; k < lines.length; k++) {
    if (!lines[k].trim()) continue;
    const row = lines[k].trim().split(/\s+/).map(Number);
    if (row.length !== nx || row.some((v) => !Number.isFinite(v))) {
      throw new Error(`snapshot row ${values.length}: expected ${nx} finite values`);
    }
    values.push(row);
  }
  if (values.length !== ny) {
    throw new Error(`snapshot has ${values.length} rows, header says ny=${ny}`);
  }
  return { field: header["field"][0], t: Number(header["t"][0]), nx, ny, xlo, xhi, ylo, yhi, values };
}

export function readSnapshot(file: string): FieldSnapshot {
  return parseSnapshotText(readFileSync(file, "utf-8"));
}

export interface Stats {
  min: number;
  max: number;
  maxAbs: number;
}

export function fieldStats(snap: FieldSnapshot): Stats {
  let min = Infinity;
  let max = -Infinity;
  for (const row of snap.values) {
    for (const v of row) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  return { min, max, maxAbs: Math.max(Math.abs(min), Math.abs(max)) };
}

export function contourLevels(snap: FieldSnapshot, n: number): number[] {
  const { min, max } = fieldStats(snap);
  const levels: number[] = [];
  for (let i = 1; i <= n; i++) levels.push(min + ((max - min) * i) / (n + 1));
  return levels;
}

export type Segment = [number, number, number, number];

/**
 * Marching-squares line segments of the level set, in physical coordinates
 * (sample points sit at cell-ish centers of the lattice).
 */
export function contourSegments(snap: FieldSnapshot, level: number): Segment[] {
  const dx = (snap.xhi - snap.xlo) / snap.nx;
  const dy = (snap.yhi - snap.ylo) / snap.ny;
  const px = (ix: number) => snap.xlo + (ix + 0.5) * dx;
  const py = (iy: number) => snap.ylo + (iy + 0.5) * dy;
  const segs: Segment[] = [];
  const lerp = (a: number, b: number) => (level - a) / (b - a);
  for (let iy = 0; iy < snap.ny - 1; iy++) {
    for (let ix = 0; ix < snap.nx - 1; ix++) {
      const v00 = snap.values[iy][ix];
      const v10 = snap.values[iy][ix + 1];
      const v01 = snap.values[iy + 1][ix];
      const v11 = snap.values[iy + 1][ix + 1];
      // crossing points on the four edges of the lattice square
      const pts: [number, number][] = [];
      if (v00 < level !== v10 < level) pts.push([px(ix) + lerp(v00, v10) * dx, py(iy)]);
      if (v01 < level !== v11 < level) pts.push([px(ix) + lerp(v01, v11) * dx, py(iy + 1)]);
      if (v00 < level !== v01 < level) pts.push([px(ix), py(iy) + lerp(v00, v01) * dy]);
      if (v10 < level !== v11 < level) pts.push([px(ix + 1), py(iy) + lerp(v10, v11) * dy]);
      if (pts.length === 2) {
        segs.push([pts[0][0], pts[0][1], pts[1][0], pts[1][1]]);
      } else if (pts.length === 4) {
        // saddle: pair by x order
        pts.sort((a, b) => a[0] - b[0]);
        segs.push([pts[0][0], pts[0][1], pts[1][0], pts[1][1]]);
        segs.push([pts[2][0], pts[2][1], pts[3][0], pts[3][1]]);
      }
    }
  }
  return segs;
}
