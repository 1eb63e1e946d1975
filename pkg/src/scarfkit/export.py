"""Self-contained JSON analysis export consumed by the viewer.

The export carries raw per-sample NN distances for every AOI within 4x the
build threshold (plus direct hits), so a client can recompute NN
probabilities for any threshold up to that horizon without the original
logs. Floats are rounded to 9 significant digits and key order is fixed, so
re-exporting identical inputs is byte-identical.
"""

from __future__ import annotations

import json

from .geometry import Ray, intersect_volume, proximity
from .mapping import MappingConfig, SampleMapping, active_aois
from .model import Recording
from .scarf import ScarfModel, confidence_series

EXPORT_VERSION = "scarfkit-export/1"

#: raw NN distances are exported out to this multiple of the build threshold
RAW_HORIZON_FACTOR = 4.0


def _r9(x: float) -> float:
    return float(f"{x:.9g}")


def _raw_nn(recording: Recording, config: MappingConfig) -> list[list[dict]]:
    """Per-sample raw proximity records, pre-threshold, within the horizon."""
    horizon = RAW_HORIZON_FACTOR * config.threshold_m
    out = []
    for sample in recording.samples:
        entries: list[dict] = []
        if sample.valid:
            ray = Ray(sample.origin, sample.direction)
            aois = active_aois(recording, sample.timestamp_ms, config.window_ms)
            rows = []
            for aoi in aois:
                prox = proximity(ray, aoi)
                hit = intersect_volume(ray, aoi.shape) is not None
                if prox.d < horizon or hit:
                    rows.append((prox.t_closest, aoi.label, aoi.instance_id, prox.d, hit))
            rows.sort()
            entries = [
                {
                    "instance_id": iid,
                    "label": label,
                    "d": _r9(d),
                    "t_closest": _r9(t),
                    "hit": hit,
                }
                for t, label, iid, d, hit in rows
            ]
        out.append(entries)
    return out


def _model_json(model: ScarfModel) -> dict:
    return {
        "variant": model.variant,
        "segments": [
            {
                "t_start_ms": seg.t_start_ms,
                "t_end_ms": seg.t_end_ms,
                "subsegments": [
                    {
                        "instance_id": sub.instance_id,
                        "label": sub.label,
                        "height": _r9(sub.height),
                        "depth_rank": sub.depth_rank,
                    }
                    for sub in seg.subsegments
                ],
                "mean_confidence_by_label": {
                    k: _r9(v) for k, v in sorted(seg.mean_confidence_by_label.items())
                },
            }
            for seg in model.segments
        ],
    }


def build_export(
    recording: Recording,
    models: dict[str, ScarfModel],
    mappings: list[SampleMapping],
    config: MappingConfig,
) -> dict:
    if recording.samples:
        t_start = recording.t_start_ms
        t_end = recording.t_end_ms
        duration = recording.duration_ms()
        period = recording.nominal_period_ms()
    else:
        t_start = t_end = duration = 0
        period = 1

    raw_nn = _raw_nn(recording, config)
    samples = []
    for sample, mapping, raw in zip(recording.samples, mappings, raw_nn):
        samples.append(
            {
                "index": mapping.sample_index,
                "timestamp_ms": sample.timestamp_ms,
                "valid": sample.valid,
                "hits": [
                    {
                        "instance_id": h.instance_id,
                        "t_entry": _r9(h.t_entry),
                        "t_exit": _r9(h.t_exit),
                    }
                    for h in mapping.hits
                ],
                "nn": raw,
            }
        )

    confidence = {}
    for label in recording.labels():
        series, mean = confidence_series(recording, label, t_start, t_end)
        confidence[label] = {
            "series": [[t, _r9(c)] for t, c in series],
            "mean": _r9(mean) if series else None,
        }

    palette = next(iter(models.values())).palette if models else {}
    return {
        "version": EXPORT_VERSION,
        "meta": dict(sorted(recording.meta.items())),
        "threshold_m": _r9(config.threshold_m),
        "nn_mode": config.nn_mode,
        "window_ms": config.window_ms,
        "raw_horizon_m": _r9(RAW_HORIZON_FACTOR * config.threshold_m),
        "timeline": {
            "t_start_ms": t_start,
            "t_end_ms": t_end,
            "duration_ms": duration,
            "nominal_period_ms": period,
        },
        "aois": [
            {
                "instance_id": a.instance_id,
                "label": a.label,
                "virtual": a.virtual,
                "t_start_ms": a.t_start_ms,
                "t_end_ms": a.t_end_ms,
                "confidence": _r9(a.confidence),
            }
            for a in recording.aois
        ],
        "samples": samples,
        "models": {name: _model_json(m) for name, m in sorted(models.items())},
        "palette": palette,
        "confidence": confidence,
    }


def write_export(export: dict) -> str:
    return json.dumps(export, separators=(",", ":")) + "\n"
