/**
 * Multi-panel line figures rendered to SVG strings with echarts in SSR
 * mode (no DOM). One grid per panel; every panel draws the requested
 * columns against the CSV's time column. Rendering is deterministic for
 * fixed inputs (no animation, no timestamps).
 */
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import * as echarts from "echarts";

import { loadCsv, requireColumn } from "./csv.js";
import { FigureSpec } from "./figspec.js";

const LN2 = Math.log(2);
const PALETTE = ["#4063d8", "#d84040", "#2e8b57", "#b8860b", "#7b3294", "#1f9e9e"];

interface PanelPlacement {
  left: string;
  top: string;
  width: string;
  height: string;
}

function placements(rows: number, cols: number, n: number): PanelPlacement[] {
  // margins in percent of the canvas; panels tile the remainder
  const hMargin = 7;
  const vMargin = 9;
  const cellW = (100 - hMargin * (cols + 1)) / cols;
  const cellH = (100 - vMargin * (rows + 1)) / rows;
  const out: PanelPlacement[] = [];
  for (let i = 0; i < n; i++) {
    const r = Math.floor(i / cols);
    const c = i % cols;
    out.push({
      left: `${hMargin + c * (cellW + hMargin)}%`,
      top: `${vMargin + r * (cellH + vMargin)}%`,
      width: `${cellW}%`,
      height: `${cellH}%`,
    });
  }
  return out;
}

export interface RenderOptions {
  /** horizontal guide line drawn on every panel, e.g. the entropy ceiling */
  guideLine?: { value: number; label: string };
}

export function buildFigureOption(spec: FigureSpec, options: RenderOptions = {}) {
  const grids: object[] = [];
  const xAxes: object[] = [];
  const yAxes: object[] = [];
  const series: object[] = [];
  const titles: object[] = [];
  const slots = placements(spec.layout.rows, spec.layout.cols, spec.panels.length);

  spec.panels.forEach((panel, idx) => {
    const table = loadCsv(panel.csv);
    const time = requireColumn(table, "time");
    const slot = slots[idx];
    grids.push({ left: slot.left, top: slot.top, width: slot.width, height: slot.height });
    titles.push({
      text: panel.title,
      textStyle: { fontSize: 13, fontWeight: "normal" },
      left: slot.left,
      top: `${parseFloat(slot.top) - 6}%`,
    });
    xAxes.push({
      gridIndex: idx,
      type: "value",
      name: spec.xlabel,
      nameLocation: "middle",
      nameGap: 24,
      min: time[0],
      max: time[time.length - 1],
    });
    yAxes.push({
      gridIndex: idx,
      type: "value",
      name: spec.ylabel,
      nameLocation: "middle",
      nameGap: 34,
    });
    panel.columns.forEach((column, j) => {
      const values = requireColumn(table, column);
      const data = time.map((t, k) => [t, values[k]]);
      const entry: Record<string, unknown> = {
        name: column,
        type: "line",
        xAxisIndex: idx,
        yAxisIndex: idx,
        showSymbol: false,
        data,
        lineStyle: { width: 1.2, color: PALETTE[j % PALETTE.length] },
        itemStyle: { color: PALETTE[j % PALETTE.length] },
      };
      if (options.guideLine && j === 0) {
        entry.markLine = {
          silent: true,
          symbol: "none",
          label: { formatter: options.guideLine.label, position: "insideEndTop" },
          lineStyle: { type: "dashed", color: "#666" },
          data: [{ yAxis: options.guideLine.value }],
        };
      }
      series.push(entry);
    });
  });

  return {
    animation: false,
    color: PALETTE,
    legend: { show: spec.panels.some((p) => p.columns.length > 1), top: 2 },
    title: titles,
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
  };
}

/**
 * zrender salts SVG class names with process-global counters, so the same
 * chart rendered twice gets different names. Renumber them in order of
 * first appearance to make output byte-identical for identical inputs
 * (the point of emitting SVG is that it diffs cleanly in review).
 */
function normalizeSvgClasses(svg: string): string {
  // instance prefix (zr7-...) appears on clip-path ids and class names
  const unprefixed = svg.replace(/\bzr\d+-/g, "zr-");
  // class numbering continues across instances; rebase by first appearance
  const seen = new Map<string, string>();
  return unprefixed.replace(/\bzr-cls-\d+\b/g, (name) => {
    let mapped = seen.get(name);
    if (mapped === undefined) {
      mapped = `zr-cls-${seen.size}`;
      seen.set(name, mapped);
    }
    return mapped;
  });
}

export function renderFigure(spec: FigureSpec, options: RenderOptions = {}): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: spec.width,
    height: spec.height,
  });
  try {
    chart.setOption(buildFigureOption(spec, options));
    return normalizeSvgClasses(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}

export function renderFigureToFile(spec: FigureSpec, options: RenderOptions = {}): string {
  const svg = renderFigure(spec, options);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf-8");
  return spec.output;
}

export const ENTROPY_GUIDE: RenderOptions = {
  guideLine: { value: LN2, label: "ln 2" },
};
