import { mkdirSync, writeFileSync } from "fs";
import { dirname } from "path";
import * as echarts from "echarts";

import { FigureSpec, buildOption, buildSeries } from "./figures.js";

/** Render one figure spec to an SVG file; returns the output path. */
export function renderFigure(fig: FigureSpec): string {
  const series = buildSeries(fig);
  const option = buildOption(fig, series);
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: 800,
    height: 520,
  });
  try {
    chart.setOption(option as echarts.EChartsOption);
    const svg = chart.renderToSVGString();
    mkdirSync(dirname(fig.out), { recursive: true });
    writeFileSync(fig.out, svg);
  } finally {
    chart.dispose();
  }
  return fig.out;
}
