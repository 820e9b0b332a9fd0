/** Write an SVG scene to disk, rasterizing to PNG when the path asks for it. */

import { writeFileSync } from "fs";

export async function writeFigure(svg: string, outPath: string): Promise<void> {
  if (outPath.toLowerCase().endsWith(".png")) {
    const { Resvg } = await import("@resvg/resvg-js");
    const png = new Resvg(svg, { fitTo: { mode: "zoom", value: 2 } }).render().asPng();
    writeFileSync(outPath, png);
  } else {
    writeFileSync(outPath, svg);
  }
}
