import { column, loadCsv } from "./csv.js";

export interface SeriesInput {
  path: string;
  label: string;
}

export interface FigureSpec {
  inputs: SeriesInput[];
  x: string;
  y: string;
  log_x?: boolean;
  title?: string;
  y_label?: string;
  out: string;
}

export interface SpecFile {
  figures: FigureSpec[];
}

export interface Series {
  label: string;
  points: [number, number][];
}

export function validateSpec(raw: unknown): SpecFile {
  const obj = raw as Partial<SpecFile>;
  if (!obj || !Array.isArray(obj.figures) || obj.figures.length === 0) {
    throw new Error("figure spec must contain a non-empty `figures` array");
  }
  obj.figures.forEach((fig, i) => {
    const where = `figures[${i}]`;
    if (!Array.isArray(fig.inputs) || fig.inputs.length === 0) {
      throw new Error(`${where}: needs at least one input CSV`);
    }
    for (const input of fig.inputs) {
      if (!input.path || !input.label) {
        throw new Error(`${where}: every input needs path and label`);
      }
    }
    for (const key of ["x", "y", "out"] as const) {
      if (!fig[key]) {
        throw new Error(`${where}: missing required key \`${key}\``);
      }
    }
  });
  return obj as SpecFile;
}

/** Average y over repeated x values (replications), sorted by x. */
export function aggregateSeries(xs: number[], ys: number[]): [number, number][] {
  const groups = new Map<number, { sum: number; n: number }>();
  for (let i = 0; i < xs.length; i++) {
    const g = groups.get(xs[i]) ?? { sum: 0, n: 0 };
    g.sum += ys[i];
    g.n += 1;
    groups.set(xs[i], g);
  }
  return [...groups.entries()]
    .map(([x, g]): [number, number] => [x, g.sum / g.n])
    .sort((a, b) => a[0] - b[0]);
}

export function buildSeries(fig: FigureSpec): Series[] {
  return fig.inputs.map((input) => {
    const table = loadCsv(input.path);
    const xs = column(table, fig.x, input.path);
    const ys = column(table, fig.y, input.path);
    return { label: input.label, points: aggregateSeries(xs, ys) };
  });
}

/** ECharts option object for one figure; kept separate for testability. */
export function buildOption(fig: FigureSpec, series: Series[]): Record<string, unknown> {
  return {
    animation: false,
    title: { text: fig.title ?? `${fig.y} vs ${fig.x}`, left: "center" },
    legend: { bottom: 0, data: series.map((s) => s.label) },
    grid: { left: 70, right: 30, top: 50, bottom: 60 },
    xAxis: {
      type: fig.log_x ? "log" : "value",
      name: fig.x,
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "value",
      name: fig.y_label ?? fig.y,
      nameLocation: "middle",
      nameGap: 52,
    },
    series: series.map((s) => ({
      name: s.label,
      type: "line",
      symbolSize: 7,
      data: s.points,
    })),
  };
}
