/** Rebuild scarf models from the export's raw per-sample records.
 *
 * The export carries, per sample, the ordered hit list and raw NN proximity
 * records out to `raw_horizon_m`. That is enough to rebuild the standard,
 * depth and NN tracks for any excluded-label set and any NN threshold up to
 * the horizon, without the original gaze/detection logs.
 */

import { recomputeNnGroup } from "./nn.js";
import type {
  Export,
  NnMode,
  ScarfModel,
  Segment,
  SubSegment,
} from "./types.js";

export interface RebuildOptions {
  thresholdM: number;
  nnMode: NnMode;
  excludedLabels: ReadonlySet<string>;
}

export function labelByInstance(exp: Export): Map<string, string> {
  return new Map(exp.aois.map((a) => [a.instance_id, a.label]));
}

/** Segment bounds tile the timeline: each sample spans to the next sample's
 * timestamp; the last spans one nominal period. */
export function segmentBounds(exp: Export): [number, number][] {
  const samples = exp.samples;
  const period = exp.timeline.nominal_period_ms;
  return samples.map((s, i) => [
    s.timestamp_ms,
    i + 1 < samples.length ? samples[i + 1].timestamp_ms : s.timestamp_ms + period,
  ]);
}

function weightedMean(points: [number, number][]): number {
  if (points.length === 1) {
    return points[0][1];
  }
  const weights: number[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    weights.push(points[i + 1][0] - points[i][0]);
  }
  weights.push(weights[weights.length - 1]);
  const total = weights.reduce((a, b) => a + b, 0);
  if (total === 0) {
    return points.reduce((a, p) => a + p[1], 0) / points.length;
  }
  return points.reduce((a, p, i) => a + weights[i] * p[1], 0) / total;
}

/** Duration-weighted mean confidence of one label over [t0, t1], falling
 * back to the plain mean of instance confidences when no series point lands
 * inside the window. Returns null for labels absent from the export. */
export function labelConfidence(
  exp: Export,
  label: string,
  t0: number,
  t1: number,
): number | null {
  const entry = exp.confidence[label];
  if (entry === undefined) {
    return null;
  }
  const points = entry.series.filter(([t]) => t0 <= t && t <= t1);
  if (points.length > 0) {
    return weightedMean(points);
  }
  const confidences = exp.aois.filter((a) => a.label === label).map((a) => a.confidence);
  if (confidences.length === 0) {
    return null;
  }
  return confidences.reduce((a, b) => a + b, 0) / confidences.length;
}

function segmentConfidences(
  exp: Export,
  subs: SubSegment[],
  t0: number,
  t1: number,
): Record<string, number> {
  const labels = Array.from(new Set(subs.map((s) => s.label))).sort();
  const out: Record<string, number> = {};
  for (const label of labels) {
    const c = labelConfidence(exp, label, t0, t1);
    if (c !== null) {
      out[label] = c;
    }
  }
  return out;
}

/** Rebuild one variant ("standard" | "depth" | "nn") from raw records. */
export function rebuildModel(
  exp: Export,
  variant: string,
  options: RebuildOptions,
): ScarfModel {
  const labels = labelByInstance(exp);
  const bounds = segmentBounds(exp);
  const segments: Segment[] = exp.samples.map((sample, i) => {
    const [t0, t1] = bounds[i];
    let subs: SubSegment[] = [];
    if (variant === "nn") {
      const group = recomputeNnGroup(
        sample.nn,
        options.thresholdM,
        options.nnMode,
        options.excludedLabels,
      );
      subs = group.map((e, rank) => ({
        instance_id: e.instance_id,
        label: e.label,
        height: e.p,
        depth_rank: rank,
      }));
    } else {
      const hits = sample.hits.filter(
        (h) => !options.excludedLabels.has(labels.get(h.instance_id) ?? ""),
      );
      if (variant === "standard") {
        hits.splice(1);
      }
      subs = hits.map((h, rank) => ({
        instance_id: h.instance_id,
        label: labels.get(h.instance_id) ?? "",
        height: variant === "standard" ? 1.0 : 1.0 / hits.length,
        depth_rank: rank,
      }));
    }
    return {
      t_start_ms: t0,
      t_end_ms: t1,
      subsegments: subs,
      mean_confidence_by_label:
        subs.length > 0 ? segmentConfidences(exp, subs, t0, t1) : {},
    };
  });
  return { variant, segments };
}

export function rebuildAll(exp: Export, options: RebuildOptions): Record<string, ScarfModel> {
  const out: Record<string, ScarfModel> = {};
  for (const variant of ["standard", "depth", "nn"]) {
    out[variant] = rebuildModel(exp, variant, options);
  }
  return out;
}
