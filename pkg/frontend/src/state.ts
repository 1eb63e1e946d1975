/** Viewer state: loaded export, label toggles, live NN threshold,
 * time-window selection with linked confidence means. */

import { rebuildAll } from "./rebuild.js";
import { labelConfidence, segmentBounds } from "./rebuild.js";
import type { Export, ScarfModel } from "./types.js";
import { EXPORT_VERSION } from "./types.js";

export class UnsupportedExportError extends Error {}

export interface Selection {
  t0: number;
  t1: number;
}

export interface ConfidenceBar {
  label: string;
  mean: number;
  color: string;
}

export class ViewerState {
  readonly export: Export;
  readonly labels: string[];
  readonly nnAvailable: boolean;
  excludedLabels: Set<string> = new Set();
  thresholdM: number;
  notice = "";
  selection: Selection | null = null;
  snapToSegments = true;

  constructor(exp: Export) {
    if (exp.version !== EXPORT_VERSION) {
      throw new UnsupportedExportError(
        `unsupported export version ${JSON.stringify(exp.version)}; expected ${EXPORT_VERSION}`,
      );
    }
    this.export = exp;
    this.labels = Object.keys(exp.palette);
    this.nnAvailable = "nn" in exp.models;
    this.thresholdM = exp.threshold_m;
  }

  /** Models for the current threshold and label set, recomputed on demand. */
  models(): Record<string, ScarfModel> {
    return rebuildAll(this.export, {
      thresholdM: this.thresholdM,
      nnMode: this.export.nn_mode,
      excludedLabels: this.excludedLabels,
    });
  }

  /** Clamp to the exported raw horizon: beyond it the raw records are
   * incomplete and probabilities would silently be wrong. */
  setThreshold(thresholdM: number): void {
    const horizon = this.export.raw_horizon_m;
    if (thresholdM > horizon) {
      this.thresholdM = horizon;
      this.notice = `threshold clamped to raw horizon ${horizon} m`;
    } else {
      this.thresholdM = Math.max(0, thresholdM);
      this.notice = "";
    }
  }

  toggleLabel(label: string): void {
    if (this.excludedLabels.has(label)) {
      this.excludedLabels.delete(label);
    } else {
      this.excludedLabels.add(label);
    }
  }

  /** Select [t0, t1]; with snapping on, bounds move to the enclosing
   * segment edges. */
  select(t0: number, t1: number): Selection {
    if (t1 < t0) {
      [t0, t1] = [t1, t0];
    }
    if (this.snapToSegments) {
      const bounds = segmentBounds(this.export);
      if (bounds.length > 0) {
        const starts = bounds.map((b) => b[0]);
        const ends = bounds.map((b) => b[1]);
        const s = starts.filter((t) => t <= t0);
        const e = ends.filter((t) => t >= t1);
        t0 = s.length > 0 ? s[s.length - 1] : starts[0];
        t1 = e.length > 0 ? e[0] : ends[ends.length - 1];
      }
    }
    this.selection = { t0, t1 };
    return this.selection;
  }

  clearSelection(): void {
    this.selection = null;
  }

  /** Confidence bars for the current selection (whole timeline when none),
   * excluded labels omitted, order following the palette. */
  confidenceBars(): ConfidenceBar[] {
    const t0 = this.selection ? this.selection.t0 : this.export.timeline.t_start_ms;
    const t1 = this.selection ? this.selection.t1 : this.export.timeline.t_end_ms;
    const bars: ConfidenceBar[] = [];
    for (const label of this.labels) {
      if (this.excludedLabels.has(label)) {
        continue;
      }
      const mean = labelConfidence(this.export, label, t0, t1);
      if (mean !== null) {
        bars.push({ label, mean, color: this.export.palette[label] });
      }
    }
    return bars;
  }
}
