/** Inverse-distance weighting, mirroring the exporter's semantics exactly. */

import type { NnMode, RawNnEntry } from "./types.js";

/**
 * Probabilities from distances. "limit" gives zero-distance entries the
 * whole mass (split equally); "paper-literal" zeroes their weight and
 * normalizes the rest, yielding all-zero when every weight is zero.
 */
export function nnWeights(distances: number[], mode: NnMode = "limit"): number[] {
  if (distances.length === 0) {
    throw new Error("empty distance list");
  }
  if (distances.some((d) => d < 0)) {
    throw new Error("negative distance");
  }
  if (mode === "limit" && distances.some((d) => d === 0)) {
    const nZero = distances.filter((d) => d === 0).length;
    return distances.map((d) => (d === 0 ? 1 / nZero : 0));
  }
  const weights = distances.map((d) => (d === 0 ? 0 : 1 / d));
  const total = weights.reduce((a, b) => a + b, 0);
  if (total === 0) {
    return weights.map(() => 0);
  }
  return weights.map((w) => w / total);
}

export interface NnMember extends RawNnEntry {
  p: number;
}

/**
 * Membership plus probabilities for one sample's raw proximity records:
 * entries below the threshold or directly hit, excluded labels removed.
 * Raw entries arrive pre-sorted by (t_closest, label, instance_id).
 */
export function recomputeNnGroup(
  raw: RawNnEntry[],
  thresholdM: number,
  mode: NnMode,
  excludedLabels: ReadonlySet<string>,
): NnMember[] {
  const members = raw.filter(
    (e) => !excludedLabels.has(e.label) && (e.d < thresholdM || e.hit),
  );
  if (members.length === 0) {
    return [];
  }
  const probs = nnWeights(
    members.map((e) => e.d),
    mode,
  );
  return members.map((e, i) => ({ ...e, p: probs[i] }));
}
