/** String-built SVG rendering for the viewer: scarf tracks and the linked
 * confidence bar chart. depth_rank 0 is drawn at the bottom of a track. */

import type { ConfidenceBar } from "./state.js";
import type { Export, ScarfModel } from "./types.js";

const FALLBACK_COLOR = "#999999";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function f2(x: number): string {
  return x.toFixed(2);
}

export interface TrackLayout {
  width: number;
  trackHeight: number;
  margin: number;
  gap: number;
}

export const DEFAULT_LAYOUT: TrackLayout = {
  width: 960,
  trackHeight: 48,
  margin: 40,
  gap: 22,
};

export function renderTracks(
  exp: Export,
  models: Record<string, ScarfModel>,
  layout: TrackLayout = DEFAULT_LAYOUT,
): string {
  const names = Object.keys(models);
  const { width, trackHeight, margin, gap } = layout;
  const plotW = width - 2 * margin;
  const t0 = exp.timeline.t_start_ms;
  const dur = Math.max(1, exp.timeline.duration_ms);
  const x = (t: number) => margin + ((t - t0) / dur) * plotW;
  const height = margin * 2 + names.length * (trackHeight + gap);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`);
  names.forEach((name, row) => {
    const top = margin + row * (trackHeight + gap);
    parts.push(
      `<text x="${f2(margin)}" y="${f2(top - 5)}" font-size="11" font-family="sans-serif">${esc(name)}</text>`,
    );
    parts.push(
      `<rect x="${f2(margin)}" y="${f2(top)}" width="${f2(plotW)}" height="${f2(trackHeight)}" fill="none" stroke="#cccccc"/>`,
    );
    for (const seg of models[name].segments) {
      const sx = x(seg.t_start_ms);
      const sw = x(seg.t_end_ms) - sx;
      let yCursor = top + trackHeight; // stack upward from the track bottom
      for (const sub of seg.subsegments) {
        const h = sub.height * trackHeight;
        yCursor -= h;
        const color = exp.palette[sub.label] ?? FALLBACK_COLOR;
        parts.push(
          `<rect x="${f2(sx)}" y="${f2(yCursor)}" width="${f2(sw)}" height="${f2(h)}" fill="${color}"><title>${esc(sub.label)} (${esc(sub.instance_id)})</title></rect>`,
        );
      }
    }
  });
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderConfidenceBars(
  bars: ConfidenceBar[],
  layout: TrackLayout = DEFAULT_LAYOUT,
): string {
  const { width, margin } = layout;
  const barH = 16;
  const rowGap = 8;
  const labelW = 120;
  const plotW = width - 2 * margin - labelW;
  const height = margin * 2 + bars.length * (barH + rowGap);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`);
  bars.forEach((bar, row) => {
    const top = margin + row * (barH + rowGap);
    parts.push(
      `<text x="${f2(margin)}" y="${f2(top + barH - 4)}" font-size="11" font-family="sans-serif">${esc(bar.label)}</text>`,
    );
    parts.push(
      `<rect x="${f2(margin + labelW)}" y="${f2(top)}" width="${f2(plotW)}" height="${f2(barH)}" fill="none" stroke="#cccccc"/>`,
    );
    parts.push(
      `<rect x="${f2(margin + labelW)}" y="${f2(top)}" width="${f2(plotW * bar.mean)}" height="${f2(barH)}" fill="${bar.color}"/>`,
    );
    parts.push(
      `<text x="${f2(margin + labelW + plotW + 6)}" y="${f2(top + barH - 4)}" font-size="11" font-family="sans-serif">${bar.mean.toFixed(3)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}
