/** Types for the `scarfkit-export/1` analysis export. */

export const EXPORT_VERSION = "scarfkit-export/1";

export type NnMode = "limit" | "paper-literal";

export interface HitRecord {
  instance_id: string;
  t_entry: number;
  t_exit: number;
}

export interface RawNnEntry {
  instance_id: string;
  label: string;
  d: number;
  t_closest: number;
  hit: boolean;
}

export interface SampleRecord {
  index: number;
  timestamp_ms: number;
  valid: boolean;
  hits: HitRecord[];
  nn: RawNnEntry[];
}

export interface AoiRecord {
  instance_id: string;
  label: string;
  virtual: boolean;
  t_start_ms: number;
  t_end_ms: number;
  confidence: number;
}

export interface SubSegment {
  instance_id: string;
  label: string;
  height: number;
  depth_rank: number;
}

export interface Segment {
  t_start_ms: number;
  t_end_ms: number;
  subsegments: SubSegment[];
  mean_confidence_by_label: Record<string, number>;
}

export interface ScarfModel {
  variant: string;
  segments: Segment[];
}

export interface ConfidenceEntry {
  series: [number, number][];
  mean: number | null;
}

export interface Export {
  version: string;
  meta: Record<string, string>;
  threshold_m: number;
  nn_mode: NnMode;
  window_ms: number;
  raw_horizon_m: number;
  timeline: {
    t_start_ms: number;
    t_end_ms: number;
    duration_ms: number;
    nominal_period_ms: number;
  };
  aois: AoiRecord[];
  samples: SampleRecord[];
  models: Record<string, ScarfModel>;
  palette: Record<string, string>;
  confidence: Record<string, ConfidenceEntry>;
}
