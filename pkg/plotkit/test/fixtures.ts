/** Synthetic simulator outputs shared by the tests. */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";

export const TS_COLUMNS =
  "t,F_left,F_recon,E3_origin,tracker,cum_E3,mass_i,mass_e,energy_total," +
  "divB_L2,divE_err_L2,psi_L2,Bz_max_abs";

/** deterministic three-mesh suite: F_recon = t, t/2, t/4; tracker/cum_E3 derived */
export function writeSyntheticSuite(root: string): void {
  const meshes: [string, number][] = [["32x16", 1], ["64x32", 0.5], ["128x64", 0.25]];
  for (const [mesh, slope] of meshes) {
    const dir = path.join(root, mesh);
    mkdirSync(dir, { recursive: true });
    const rows = [TS_COLUMNS];
    for (let k = 0; k <= 40; k++) {
      const t = k;
      const fr = slope * t;
      const tracker = 0.4 + 0.5 * slope * t;
      const cum = slope * t;
      rows.push(
        [t, 5.8 - fr, fr, -slope, tracker, cum, 11.02, 11.02, 55.1, 1e-3, 1e-14, 1e-2, 1e-16].join(","),
      );
    }
    writeFileSync(path.join(dir, "timeseries.csv"), rows.join("\n") + "\n");
  }
}

/** small flux-function snapshot: psi = -cos(x) cos(y/2) island pattern */
export function syntheticFluxSnapshot(): string {
  const nx = 24;
  const ny = 12;
  const xhi = 4 * Math.PI;
  const yhi = 2 * Math.PI;
  const lines = [
    "# field flux_function",
    "# t 0",
    `# nx ${nx} ny ${ny}`,
    `# xlo xhi ylo yhi 0 ${xhi} 0 ${yhi}`,
  ];
  for (let iy = 0; iy < ny; iy++) {
    const y = ((iy + 0.5) / ny) * yhi;
    const row: string[] = [];
    for (let ix = 0; ix < nx; ix++) {
      const x = ((ix + 0.5) / nx) * xhi;
      row.push((0.5 * Math.log(Math.cosh(y - Math.PI)) + 0.1 * Math.cos(x / 2) * Math.cos(y / 4)).toPrecision(10));
    }
    lines.push(row.join(" "));
  }
  return lines.join("\n") + "\n";
}

/** single-signed B3 lobe in the quadrant */
export function syntheticB3Snapshot(): string {
  const nx = 16;
  const ny = 8;
  const lines = [
    "# field B3",
    "# t 20",
    `# nx ${nx} ny ${ny}`,
    `# xlo xhi ylo yhi 0 ${4 * Math.PI} 0 ${2 * Math.PI}`,
  ];
  for (let iy = 0; iy < ny; iy++) {
    const row: string[] = [];
    for (let ix = 0; ix < nx; ix++) {
      const gx = Math.exp(-((ix - 5) ** 2) / 8);
      const gy = Math.exp(-((iy - 2) ** 2) / 4);
      row.push((0.08 * gx * gy).toPrecision(8));
    }
    lines.push(row.join(" "));
  }
  return lines.join("\n") + "\n";
}
