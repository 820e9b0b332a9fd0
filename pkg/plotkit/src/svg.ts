/**
 * Minimal hand-rolled SVG scene building: panels with axes, polylines,
 * contour segments, and cell heat maps. No DOM, just strings.
 */

export interface Extent {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export class Panel {
  els: string[] = [];

  constructor(
    public left: number,
    public top: number,
    public width: number,
    public height: number,
    public xd: [number, number],
    public yd: [number, number],
  ) {}

  sx(x: number): number {
    return this.left + ((x - this.xd[0]) / (this.xd[1] - this.xd[0] || 1)) * this.width;
  }

  sy(y: number): number {
    return this.top + this.height - ((y - this.yd[0]) / (this.yd[1] - this.yd[0] || 1)) * this.height;
  }

  polyline(xs: number[], ys: number[], stroke: string, width = 1.4, dash = "") {
    const pts = xs.map((x, i) => `${this.sx(x).toFixed(2)},${this.sy(ys[i]).toFixed(2)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.els.push(`<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${d} points="${pts}"/>`);
  }

  segment(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 0.9) {
    this.els.push(
      `<line x1="${this.sx(x1).toFixed(2)}" y1="${this.sy(y1).toFixed(2)}" ` +
        `x2="${this.sx(x2).toFixed(2)}" y2="${this.sy(y2).toFixed(2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  cell(x: number, y: number, w: number, h: number, fill: string) {
    const px = this.sx(x);
    const py = this.sy(y + h);
    const pw = (w / (this.xd[1] - this.xd[0])) * this.width;
    const ph = (h / (this.yd[1] - this.yd[0])) * this.height;
    this.els.push(
      `<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${(pw + 0.25).toFixed(2)}" ` +
        `height="${(ph + 0.25).toFixed(2)}" fill="${fill}"/>`,
    );
  }

  axes(title: string, xlabel: string, ylabel: string): string[] {
    const out: string[] = [];
    const b = `<rect x="${this.left}" y="${this.top}" width="${this.width}" height="${this.height}" fill="none" stroke="#444" stroke-width="1"/>`;
    out.push(b);
    out.push(text(this.left + this.width / 2, this.top - 7, title, 13, "middle", true));
    out.push(text(this.left + this.width / 2, this.top + this.height + 30, xlabel, 12, "middle"));
    out.push(
      `<text x="${this.left - 46}" y="${this.top + this.height / 2}" font-size="12" text-anchor="middle" ` +
        `transform="rotate(-90 ${this.left - 46} ${this.top + this.height / 2})" font-family="sans-serif">${ylabel}</text>`,
    );
    for (const tx of ticks(this.xd[0], this.xd[1], 6)) {
      const px = this.sx(tx);
      out.push(`<line x1="${px}" y1="${this.top + this.height}" x2="${px}" y2="${this.top + this.height + 4}" stroke="#444"/>`);
      out.push(text(px, this.top + this.height + 16, fmtTick(tx), 10, "middle"));
    }
    for (const ty of ticks(this.yd[0], this.yd[1], 5)) {
      const py = this.sy(ty);
      out.push(`<line x1="${this.left - 4}" y1="${py}" x2="${this.left}" y2="${py}" stroke="#444"/>`);
      out.push(text(this.left - 7, py + 3, fmtTick(ty), 10, "end"));
    }
    return out;
  }

  render(): string {
    return this.els.join("\n");
  }
}

export function text(x: number, y: number, s: string, size = 11, anchor = "start", bold = false): string {
  const w = bold ? ' font-weight="bold"' : "";
  return `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-size="${size}" text-anchor="${anchor}"${w} font-family="sans-serif">${escapeXml(s)}</text>`;
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function ticks(lo: number, hi: number, n: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  return out;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(0);
  return Number(v.toPrecision(3)).toString();
}

/** blue-white-red diverging map for signed fields, s in [-1, 1] */
export function divergingColor(s: number): string {
  const t = Math.max(-1, Math.min(1, s));
  const r = t > 0 ? 255 : Math.round(255 * (1 + t));
  const b = t < 0 ? 255 : Math.round(255 * (1 - t));
  const g = Math.round(255 * (1 - Math.abs(t)));
  return `rgb(${r},${g},${b})`;
}

export const MESH_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];
export const MESH_DASHES = ["", "6 3", "2 2", "8 2 2 2", "4 4"];

export function document(width: number, height: number, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body.join("\n") +
    "\n</svg>\n"
  );
}
