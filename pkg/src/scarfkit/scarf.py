"""Scarf plot data model: segments, stacked sub-segments, runs, palette.

Each gaze sample yields one segment spanning from its timestamp to the next
sample's timestamp; the last segment gets one nominal sample period so that
segments tile [t_start, t_start + duration] exactly. Sub-segments stack
nearest-to-viewer at the bottom (depth_rank 0).
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass

from .mapping import MappingConfig, SampleMapping, map_recording
from .model import AOIInstance, Recording

VARIANTS = ("standard", "depth", "nn")

MERGE_HEIGHT_TOL = 1e-6

# 12-color categorical palette (paired-hue scheme); labels beyond 12 reuse
# hues with a lightness shift.
PALETTE12 = [
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
    "#aec7e8",
    "#ffbb78",
]


class UnknownLabelError(KeyError):
    pass


@dataclass(frozen=True)
class SubSegment:
    instance_id: str
    label: str
    height: float  # fraction of the track, (0, 1]
    depth_rank: int  # 0 = nearest viewer, drawn at the bottom


@dataclass(frozen=True)
class Segment:
    t_start_ms: int
    t_end_ms: int
    subsegments: tuple[SubSegment, ...]  # sorted by depth_rank; empty = white space
    mean_confidence_by_label: dict[str, float]


@dataclass(frozen=True)
class ScarfModel:
    variant: str
    segments: tuple[Segment, ...]
    palette: dict[str, str]


def assign_palette(labels: list[str]) -> dict[str, str]:
    """Deterministic label -> color, order-sensitive by design."""
    out: dict[str, str] = {}
    for i, label in enumerate(labels):
        base = PALETTE12[i % len(PALETTE12)]
        cycle = i // len(PALETTE12)
        if cycle == 0:
            out[label] = base
        else:
            r = int(base[1:3], 16) / 255.0
            g = int(base[3:5], 16) / 255.0
            b = int(base[5:7], 16) / 255.0
            h, l, s = colorsys.rgb_to_hls(r, g, b)
            l = min(0.92, l + 0.18 * cycle)
            r2, g2, b2 = colorsys.hls_to_rgb(h, l, s)
            out[label] = f"#{round(r2 * 255):02x}{round(g2 * 255):02x}{round(b2 * 255):02x}"
    return out


def _weighted_mean(points: list[tuple[int, float]]) -> float:
    """Duration-weighted mean: each point covers until the next one; the last
    point reuses the previous interval (or weight 1 when alone)."""
    if len(points) == 1:
        return points[0][1]
    weights = [points[i + 1][0] - points[i][0] for i in range(len(points) - 1)]
    weights.append(weights[-1])
    total = sum(weights)
    if total == 0:
        return sum(c for _, c in points) / len(points)
    return sum(w * c for w, (_, c) in zip(weights, points)) / total


def confidence_series(
    recording: Recording, label: str, t0: int, t1: int
) -> tuple[list[tuple[int, float]], float]:
    """Detection confidences of one label within [t0, t1], plus their
    duration-weighted mean."""
    instances = [a for a in recording.aois if a.label == label]
    if not instances:
        raise UnknownLabelError(label)
    points: list[tuple[int, float]] = []
    for aoi in instances:
        series = aoi.confidence_series or ((aoi.t_start_ms, aoi.confidence),)
        points.extend((t, c) for t, c in series if t0 <= t <= t1)
    points.sort()
    if not points:
        return [], float("nan")
    return points, _weighted_mean(points)


def _segment_confidences(
    labels: list[str], aois_by_label: dict[str, list[AOIInstance]], t0: int, t1: int
) -> dict[str, float]:
    out: dict[str, float] = {}
    for label in labels:
        points: list[tuple[int, float]] = []
        fallback: list[float] = []
        for aoi in aois_by_label.get(label, []):
            series = aoi.confidence_series or ((aoi.t_start_ms, aoi.confidence),)
            points.extend((t, c) for t, c in series if t0 <= t <= t1)
            fallback.append(aoi.confidence)
        points.sort()
        if points:
            out[label] = _weighted_mean(points)
        elif fallback:
            out[label] = sum(fallback) / len(fallback)
    return out


def _segment_bounds(recording: Recording) -> list[tuple[int, int]]:
    samples = recording.samples
    period = recording.nominal_period_ms()
    bounds = []
    for i, s in enumerate(samples):
        end = samples[i + 1].timestamp_ms if i + 1 < len(samples) else s.timestamp_ms + period
        bounds.append((s.timestamp_ms, end))
    return bounds


def build(
    recording: Recording,
    variant: str,
    config: MappingConfig | None = None,
    mappings: list[SampleMapping] | None = None,
    palette: dict[str, str] | None = None,
) -> ScarfModel:
    """Build one scarf variant. Mappings may be shared across variants."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    config = config or MappingConfig()
    if mappings is None:
        mappings = map_recording(recording, config)
    if palette is None:
        palette = assign_palette(recording.labels())
    aois_by_id = {a.instance_id: a for a in recording.aois}
    aois_by_label: dict[str, list[AOIInstance]] = {}
    for a in recording.aois:
        aois_by_label.setdefault(a.label, []).append(a)

    segments: list[Segment] = []
    for (t0, t1), m in zip(_segment_bounds(recording), mappings):
        subs: list[SubSegment] = []
        if variant == "standard":
            if m.hits:
                h = m.hits[0]
                subs.append(SubSegment(h.instance_id, aois_by_id[h.instance_id].label, 1.0, 0))
        elif variant == "depth":
            k = len(m.hits)
            for rank, h in enumerate(m.hits):
                subs.append(
                    SubSegment(h.instance_id, aois_by_id[h.instance_id].label, 1.0 / k, rank)
                )
        else:  # nn: heights are probabilities, stacked by ascending t_closest
            for rank, e in enumerate(m.nn.entries):
                subs.append(SubSegment(e.instance_id, e.label, e.p, rank))
        labels = sorted({s.label for s in subs})
        conf = _segment_confidences(labels, aois_by_label, t0, t1) if subs else {}
        segments.append(Segment(t0, t1, tuple(subs), conf))

    return ScarfModel(variant, tuple(segments), palette)


def _same_composition(a: Segment, b: Segment) -> bool:
    if len(a.subsegments) != len(b.subsegments):
        return False
    for sa, sb in zip(a.subsegments, b.subsegments):
        if (
            sa.instance_id != sb.instance_id
            or sa.depth_rank != sb.depth_rank
            or abs(sa.height - sb.height) > MERGE_HEIGHT_TOL
        ):
            return False
    return True


def merge_runs(model: ScarfModel) -> ScarfModel:
    """Merge adjacent segments with identical composition; confidences merge
    as duration-weighted means. Idempotent and duration-preserving."""
    merged: list[Segment] = []
    for seg in model.segments:
        if merged and _same_composition(merged[-1], seg) and merged[-1].t_end_ms == seg.t_start_ms:
            prev = merged[-1]
            d1 = prev.t_end_ms - prev.t_start_ms
            d2 = seg.t_end_ms - seg.t_start_ms
            conf = {}
            for label in set(prev.mean_confidence_by_label) | set(seg.mean_confidence_by_label):
                c1 = prev.mean_confidence_by_label.get(label)
                c2 = seg.mean_confidence_by_label.get(label)
                if c1 is None:
                    conf[label] = c2
                elif c2 is None:
                    conf[label] = c1
                else:
                    conf[label] = (c1 * d1 + c2 * d2) / (d1 + d2)
            merged[-1] = Segment(prev.t_start_ms, seg.t_end_ms, prev.subsegments, conf)
        else:
            merged.append(seg)
    return ScarfModel(model.variant, tuple(merged), model.palette)


def filter_labels(
    recording: Recording, excluded: set[str]
) -> tuple[Recording, list[str]]:
    """Remove AOIs by label so mappings recompute (and NN probabilities
    renormalize) on rebuild. Unknown labels produce warnings, not errors."""
    present = set(recording.labels())
    warnings = [f"label not in recording: {lbl!r}" for lbl in sorted(excluded - present)]
    kept = tuple(a for a in recording.aois if a.label not in excluded)
    return Recording(recording.samples, kept, dict(recording.meta)), warnings


def white_space_fraction(model: ScarfModel) -> float:
    total = sum(s.t_end_ms - s.t_start_ms for s in model.segments)
    if total == 0:
        return 0.0
    white = sum(s.t_end_ms - s.t_start_ms for s in model.segments if not s.subsegments)
    return white / total
