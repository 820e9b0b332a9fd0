/**
 * Figure assembly: the three-panel convergence plot (reconnected flux, the
 * X-point inertial tracker, and cumulative -E3, one curve per mesh), and
 * field plots (flux-function contours = field lines, diverging B3 map).
 */

import { ConvergenceData, CONVERGENCE_COLUMNS } from "./timeseries.js";
import { FieldSnapshot, contourLevels, contourSegments, fieldStats } from "./snapshot.js";
import { Panel, MESH_COLORS, MESH_DASHES, divergingColor, document, text, fmtTick } from "./svg.js";

const PANEL_TITLES: Record<string, string> = {
  F_recon: "reconnected flux",
  tracker: "X-point tracker  -m̃ᵢm̃ₑJ₃/ρ",
  cum_E3: "cumulative -E₃ at integer times",
};

export function convergenceFigure(data: ConvergenceData, title = ""): string {
  const width = 1000;
  const panelH = 190;
  const top0 = 46;
  const gap = 58;
  const height = top0 + CONVERGENCE_COLUMNS.length * (panelH + gap);
  const body: string[] = [];
  if (title) body.push(text(width / 2, 22, title, 15, "middle", true));

  let tmax = 0;
  for (const mesh of data.meshes) tmax = Math.max(tmax, ...data.t[mesh]);

  CONVERGENCE_COLUMNS.forEach((col, pi) => {
    let lo = Infinity;
    let hi = -Infinity;
    for (const mesh of data.meshes) {
      for (const v of data.panels[col][mesh]) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
    if (!(hi > lo)) hi = lo + 1;
    const pad = 0.06 * (hi - lo);
    const panel = new Panel(70, top0 + pi * (panelH + gap), width - 250, panelH, [0, tmax], [lo - pad, hi + pad]);
    data.meshes.forEach((mesh, mi) => {
      panel.polyline(data.t[mesh], data.panels[col][mesh],
        MESH_COLORS[mi % MESH_COLORS.length], 1.5, MESH_DASHES[mi % MESH_DASHES.length]);
    });
    body.push(...panel.axes(PANEL_TITLES[col] ?? col, pi === CONVERGENCE_COLUMNS.length - 1 ? "t" : "", col));
    body.push(panel.render());
    // legend on the right
    data.meshes.forEach((mesh, mi) => {
      const lx = width - 160;
      const ly = panel.top + 16 + mi * 18;
      const dash = MESH_DASHES[mi % MESH_DASHES.length];
      body.push(
        `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 28}" y2="${ly - 4}" stroke="${MESH_COLORS[mi % MESH_COLORS.length]}" ` +
          `stroke-width="2"${dash ? ` stroke-dasharray="${dash}"` : ""}/>`,
      );
      body.push(text(lx + 34, ly, mesh, 11));
    });
  });
  return document(width, height, body);
}

function fieldPanel(snap: FieldSnapshot, left: number, top: number, w: number, h: number): string[] {
  const body: string[] = [];
  const panel = new Panel(left, top, w, h, [snap.xlo, snap.xhi], [snap.ylo, snap.yhi]);
  if (snap.field === "flux_function") {
    for (const level of contourLevels(snap, 14)) {
      for (const [x1, y1, x2, y2] of contourSegments(snap, level)) {
        panel.segment(x1, y1, x2, y2, "#20508c");
      }
    }
    body.push(...panel.axes(`field lines (flux function), t = ${fmtTick(snap.t)}`, "x", "y"));
  } else {
    const stats = fieldStats(snap);
    const scale = stats.maxAbs > 0 ? stats.maxAbs : 1;
    const dx = (snap.xhi - snap.xlo) / snap.nx;
    const dy = (snap.yhi - snap.ylo) / snap.ny;
    for (let iy = 0; iy < snap.ny; iy++) {
      for (let ix = 0; ix < snap.nx; ix++) {
        panel.cell(snap.xlo + ix * dx, snap.ylo + iy * dy, dx, dy, divergingColor(snap.values[iy][ix] / scale));
      }
    }
    body.push(
      ...panel.axes(`${snap.field}, t = ${fmtTick(snap.t)}  (max |v| = ${stats.maxAbs.toExponential(2)})`, "x", "y"),
    );
  }
  body.push(panel.render());
  return body;
}

export function fieldsFigure(snaps: FieldSnapshot[]): string {
  const width = 860;
  const panelW = width - 170;
  const body: string[] = [];
  let top = 40;
  for (const snap of snaps) {
    const aspect = (snap.yhi - snap.ylo) / (snap.xhi - snap.xlo);
    const panelH = Math.max(120, Math.round(panelW * aspect));
    // contours drawn above the heat map if both requested; panels stack
    body.push(...fieldPanel(snap, 90, top, panelW, panelH));
    top += panelH + 70;
  }
  return document(width, top, body);
}
