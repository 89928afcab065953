/** Posterior visualizations: 1D mean curve with a +-2 std band, 2D heatmap. */

import type { PosteriorView, SessionView } from "./types";

const WIDTH = 640;
const HEIGHT = 280;
const PAD = 36;

export interface BandGeometry {
  xs: number[];
  means: number[];
  lows: number[]; // mean - 2 std
  highs: number[]; // mean + 2 std
}

export function bandGeometry(posterior: PosteriorView, dimName: string): BandGeometry {
  const xs = posterior.actions.map((a) => a.coordinates[dimName]);
  const means = posterior.actions.map((a) => a.mean);
  const lows = posterior.actions.map((a) => a.mean - 2 * a.std);
  const highs = posterior.actions.map((a) => a.mean + 2 * a.std);
  return { xs, means, lows, highs };
}

function scale(values: number[], lo: number, hi: number, outLo: number, outHi: number) {
  const span = hi - lo || 1;
  return values.map((v) => outLo + ((v - lo) / span) * (outHi - outLo));
}

/** SVG path strings for the mean line and the closed band polygon. */
export function bandPaths(geom: BandGeometry): { line: string; band: string } {
  const lo = Math.min(...geom.lows);
  const hi = Math.max(...geom.highs);
  const px = scale(geom.xs, Math.min(...geom.xs), Math.max(...geom.xs), PAD, WIDTH - PAD);
  const meanY = scale(geom.means, lo, hi, HEIGHT - PAD, PAD);
  const lowY = scale(geom.lows, lo, hi, HEIGHT - PAD, PAD);
  const highY = scale(geom.highs, lo, hi, HEIGHT - PAD, PAD);
  const line = px.map((x, i) => `${i ? "L" : "M"}${x.toFixed(1)},${meanY[i].toFixed(1)}`).join(" ");
  const upper = px.map((x, i) => `${i ? "L" : "M"}${x.toFixed(1)},${highY[i].toFixed(1)}`).join(" ");
  const lower = [...px.keys()]
    .reverse()
    .map((i) => `L${px[i].toFixed(1)},${lowY[i].toFixed(1)}`)
    .join(" ");
  return { line, band: `${upper} ${lower} Z` };
}

/** Blue-to-red color for a unit-interval value. */
export function heatColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const r = Math.round(40 + 215 * clamped);
  const b = Math.round(255 - 215 * clamped);
  return `rgb(${r},80,${b})`;
}

export interface HeatCell {
  index: number;
  row: number;
  col: number;
  color: string;
  executed: boolean;
}

export function heatmapCells(
  posterior: PosteriorView,
  view: SessionView,
  executedIndices: Set<number>,
): HeatCell[] {
  const [d0, d1] = view.action_space.dims;
  const means = posterior.actions.map((a) => a.mean);
  const lo = Math.min(...means);
  const hi = Math.max(...means);
  return posterior.actions.map((a) => ({
    index: a.index,
    row: Math.floor(a.index / d1.count),
    col: a.index % d1.count,
    color: heatColor((a.mean - lo) / (hi - lo || 1)),
    executed: executedIndices.has(a.index),
  }));
}

export function renderPosterior(
  container: HTMLElement,
  view: SessionView,
  posterior: PosteriorView,
  executedIndices: Set<number>,
): void {
  container.innerHTML = "";
  const dims = view.action_space.dims;
  if (dims.length === 1) {
    const geom = bandGeometry(posterior, dims[0].name);
    const { line, band } = bandPaths(geom);
    const svg = `
      <svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="posterior utility">
        <path d="${band}" fill="#9db8e8" opacity="0.45"/>
        <path d="${line}" fill="none" stroke="#1d4ed8" stroke-width="2"/>
      </svg>`;
    container.insertAdjacentHTML("beforeend", svg);
    return;
  }
  const [d0, d1] = dims;
  const cells = heatmapCells(posterior, view, executedIndices);
  const size = Math.min(28, Math.floor((WIDTH - 2 * PAD) / d1.count));
  const rows = d0.count;
  const svgCells = cells
    .map((c) => {
      const x = PAD + c.col * size;
      const y = PAD + (rows - 1 - c.row) * size;
      const marker = c.executed
        ? `<circle cx="${x + size / 2}" cy="${y + size / 2}" r="${size / 5}" fill="white" stroke="black" data-executed="${c.index}"/>`
        : "";
      return `<rect x="${x}" y="${y}" width="${size}" height="${size}" fill="${c.color}" data-index="${c.index}"/>${marker}`;
    })
    .join("");
  const height = 2 * PAD + rows * size;
  container.insertAdjacentHTML(
    "beforeend",
    `<svg viewBox="0 0 ${WIDTH} ${height}" role="img" aria-label="posterior heatmap">${svgCells}</svg>`,
  );
}
