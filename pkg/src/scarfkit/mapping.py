"""Per-sample gaze-to-AOI assignment under the three strategies.

standard: the AOI hit first along the gaze ray.
depth:    all intersected AOIs, nearest first.
nn:       all AOIs whose center-to-ray distance is below a threshold (plus
          direct hits), weighted by inverse distance.

Ties are broken deterministically everywhere: ascending t, then label,
then instance_id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import HitRecord, Ray, intersect_volume, proximity
from .model import AOIInstance, GazeSample, Recording

DEFAULT_THRESHOLD_M = 0.25
DEFAULT_WINDOW_MS = 50

#: zero-distance handling for inverse-distance weights
MODE_LIMIT = "limit"
MODE_PAPER_LITERAL = "paper-literal"


@dataclass(frozen=True)
class MappingConfig:
    threshold_m: float = DEFAULT_THRESHOLD_M
    nn_mode: str = MODE_LIMIT
    window_ms: int = DEFAULT_WINDOW_MS


@dataclass(frozen=True)
class NNEntry:
    instance_id: str
    label: str
    d: float
    t_closest: float
    weight: float  # 1/d for d > 0, 0 for d == 0
    p: float
    hit: bool


@dataclass(frozen=True)
class NNGroup:
    entries: tuple[NNEntry, ...]
    threshold: float


@dataclass(frozen=True)
class SampleMapping:
    sample_index: int
    hits: tuple[HitRecord, ...]  # ascending t_entry
    nn: NNGroup


def nn_weights(distances: list[float], mode: str = MODE_LIMIT) -> list[float]:
    """Inverse-distance probabilities.

    limit mode (default): a zero distance takes the whole mass, split equally
    among zero-distance entries. paper-literal mode: zero distances get zero
    weight and the rest normalize; if every weight is zero, all probabilities
    are zero.
    """
    if not distances:
        raise ValueError("empty distance list")
    if any(d < 0 for d in distances):
        raise ValueError("negative distance")

    if mode == MODE_LIMIT and any(d == 0.0 for d in distances):
        n_zero = sum(1 for d in distances if d == 0.0)
        return [1.0 / n_zero if d == 0.0 else 0.0 for d in distances]

    weights = [0.0 if d == 0.0 else 1.0 / d for d in distances]
    total = sum(weights)
    if total == 0.0:
        return [0.0 for _ in weights]
    return [w / total for w in weights]


def active_aois(recording: Recording, timestamp_ms: int, window_ms: int) -> list[AOIInstance]:
    """AOIs whose active span contains the timestamp within +-window_ms."""
    return [
        a
        for a in recording.aois
        if a.t_start_ms - window_ms <= timestamp_ms <= a.t_end_ms + window_ms
    ]


def _hit_sort_key(aois_by_id: dict[str, AOIInstance]):
    def key(h: HitRecord):
        a = aois_by_id[h.instance_id]
        return (h.t_entry, a.label, a.instance_id)

    return key


def map_depth(sample: GazeSample, aois: list[AOIInstance]) -> list[HitRecord]:
    """All AOIs intersected by the gaze ray, ascending entry depth."""
    if not sample.valid:
        return []
    ray = Ray(sample.origin, sample.direction)
    hits = []
    for aoi in aois:
        span = intersect_volume(ray, aoi.shape)
        if span is not None:
            hits.append(HitRecord(aoi.instance_id, span[0], span[1]))
    by_id = {a.instance_id: a for a in aois}
    hits.sort(key=_hit_sort_key(by_id))
    return hits


def map_standard(sample: GazeSample, aois: list[AOIInstance]) -> Optional[str]:
    """The instance hit first by the point of regard, or None (white space)."""
    hits = map_depth(sample, aois)
    return hits[0].instance_id if hits else None


def map_nn(
    sample: GazeSample,
    aois: list[AOIInstance],
    threshold_m: float = DEFAULT_THRESHOLD_M,
    mode: str = MODE_LIMIT,
) -> NNGroup:
    """NN group: AOIs with center distance below threshold, plus direct hits.

    Direct hits are force-included even beyond the threshold (a hit is
    stronger evidence than proximity); their d stays the center distance.
    """
    if not sample.valid:
        return NNGroup((), threshold_m)
    ray = Ray(sample.origin, sample.direction)
    members: list[tuple[AOIInstance, float, float, bool]] = []
    for aoi in aois:
        prox = proximity(ray, aoi)
        hit = intersect_volume(ray, aoi.shape) is not None
        if prox.d < threshold_m or hit:
            members.append((aoi, prox.d, prox.t_closest, hit))
    if not members:
        return NNGroup((), threshold_m)
    members.sort(key=lambda m: (m[2], m[0].label, m[0].instance_id))
    probs = nn_weights([m[1] for m in members], mode)
    entries = tuple(
        NNEntry(
            instance_id=aoi.instance_id,
            label=aoi.label,
            d=d,
            t_closest=t,
            weight=0.0 if d == 0.0 else 1.0 / d,
            p=p,
            hit=hit,
        )
        for (aoi, d, t, hit), p in zip(members, probs)
    )
    return NNGroup(entries, threshold_m)


def map_sample(
    sample: GazeSample, sample_index: int, aois: list[AOIInstance], config: MappingConfig
) -> SampleMapping:
    return SampleMapping(
        sample_index=sample_index,
        hits=tuple(map_depth(sample, aois)),
        nn=map_nn(sample, aois, config.threshold_m, config.nn_mode),
    )


def map_recording(recording: Recording, config: MappingConfig) -> list[SampleMapping]:
    """Evaluate every sample; pure and order-independent per sample."""
    return [
        map_sample(s, i, active_aois(recording, s.timestamp_ms, config.window_ms), config)
        for i, s in enumerate(recording.samples)
    ]
