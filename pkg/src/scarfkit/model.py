"""Shared domain types: gaze samples, AOI instances, bounding volumes, recordings.

Units are fixed across the toolkit: milliseconds for time, meters for space.
All types are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

Vec3 = tuple[float, float, float]

#: tolerance for |direction| = 1 on validated samples
UNIT_TOL = 1e-6
#: directions within this of unit length are silently renormalized at ingestion
NORMALIZE_TOL = 1e-3


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; min <= max componentwise. Degenerate (flat) axes are legal."""

    min: Vec3
    max: Vec3


@dataclass(frozen=True)
class Sphere:
    center: Vec3
    radius: float


BoundingVolume = Union[Box, Sphere]


@dataclass(frozen=True)
class GazeSample:
    """One timestamped gaze ray. Invalid samples keep their timestamp but carry
    zero geometry and render as white space."""

    timestamp_ms: int
    origin: Vec3
    direction: Vec3
    valid: bool


@dataclass(frozen=True)
class AOIInstance:
    """A labeled bounding volume valid over a time span.

    Identity is instance_id; labels are not unique (a scene may contain two
    "bottle" instances). Color is keyed by label, geometry by instance.
    confidence_series holds per-detection (timestamp_ms, confidence) pairs;
    confidence is their plain mean, kept for quick access.
    """

    instance_id: str
    label: str
    shape: BoundingVolume
    confidence: float
    virtual: bool
    t_start_ms: int
    t_end_ms: int
    confidence_series: tuple[tuple[int, float], ...] = ()

    @property
    def active_span(self) -> tuple[int, int]:
        return (self.t_start_ms, self.t_end_ms)


@dataclass(frozen=True)
class Recording:
    samples: tuple[GazeSample, ...]
    aois: tuple[AOIInstance, ...]
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def t_start_ms(self) -> int:
        return self.samples[0].timestamp_ms if self.samples else 0

    @property
    def t_end_ms(self) -> int:
        return self.samples[-1].timestamp_ms if self.samples else 0

    def nominal_period_ms(self) -> int:
        """Median inter-sample gap; used as the duration of the last segment."""
        if len(self.samples) < 2:
            return 1
        gaps = sorted(
            b.timestamp_ms - a.timestamp_ms
            for a, b in zip(self.samples, self.samples[1:])
        )
        return gaps[len(gaps) // 2]

    def duration_ms(self) -> int:
        """Timeline length covered by segments: last timestamp plus one nominal
        sample period, relative to the first timestamp."""
        if not self.samples:
            return 0
        return self.t_end_ms - self.t_start_ms + self.nominal_period_ms()

    def labels(self) -> list[str]:
        """Distinct labels in first-appearance order."""
        seen: list[str] = []
        for aoi in self.aois:
            if aoi.label not in seen:
                seen.append(aoi.label)
        return seen


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    index: Optional[int] = None


def vnorm(v: Vec3) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def aoi_center(volume: BoundingVolume) -> Vec3:
    if isinstance(volume, Box):
        return (
            (volume.min[0] + volume.max[0]) / 2.0,
            (volume.min[1] + volume.max[1]) / 2.0,
            (volume.min[2] + volume.max[2]) / 2.0,
        )
    if isinstance(volume, Sphere):
        return volume.center
    raise TypeError(f"not a bounding volume: {volume!r}")


def validate_recording(recording: Recording) -> list[ValidationIssue]:
    """Check structural invariants. Issues are data, not failures; an empty
    list means the recording is well-formed."""
    issues: list[ValidationIssue] = []

    prev_t: Optional[int] = None
    for i, s in enumerate(recording.samples):
        if prev_t is not None and s.timestamp_ms <= prev_t:
            issues.append(
                ValidationIssue(
                    "NonMonotonicTimestamp",
                    f"sample {i}: timestamp {s.timestamp_ms} <= previous {prev_t}",
                    i,
                )
            )
        prev_t = s.timestamp_ms
        if s.valid and abs(vnorm(s.direction) - 1.0) > UNIT_TOL:
            issues.append(
                ValidationIssue(
                    "NonUnitDirection",
                    f"sample {i}: |direction| = {vnorm(s.direction):.6g}",
                    i,
                )
            )

    seen_ids: set[str] = set()
    for j, aoi in enumerate(recording.aois):
        if aoi.instance_id in seen_ids:
            issues.append(
                ValidationIssue(
                    "DuplicateInstanceId", f"aoi {j}: duplicate id {aoi.instance_id!r}", j
                )
            )
        seen_ids.add(aoi.instance_id)
        if not (0.0 <= aoi.confidence <= 1.0):
            issues.append(
                ValidationIssue(
                    "ConfidenceOutOfRange",
                    f"aoi {aoi.instance_id!r}: confidence {aoi.confidence}",
                    j,
                )
            )
        for _, c in aoi.confidence_series:
            if not (0.0 <= c <= 1.0):
                issues.append(
                    ValidationIssue(
                        "ConfidenceOutOfRange",
                        f"aoi {aoi.instance_id!r}: series confidence {c}",
                        j,
                    )
                )
                break
        if aoi.t_start_ms > aoi.t_end_ms:
            issues.append(
                ValidationIssue(
                    "InvalidSpan",
                    f"aoi {aoi.instance_id!r}: span [{aoi.t_start_ms}, {aoi.t_end_ms}]",
                    j,
                )
            )
        elif recording.samples and (
            aoi.t_end_ms < recording.t_start_ms or aoi.t_start_ms > recording.t_end_ms
        ):
            issues.append(
                ValidationIssue(
                    "SpanOutsideRecording",
                    f"aoi {aoi.instance_id!r}: span does not overlap sample range",
                    j,
                )
            )
        if isinstance(aoi.shape, Box):
            if any(lo > hi for lo, hi in zip(aoi.shape.min, aoi.shape.max)):
                issues.append(
                    ValidationIssue(
                        "InvalidVolume",
                        f"aoi {aoi.instance_id!r}: box min > max",
                        j,
                    )
                )
        elif isinstance(aoi.shape, Sphere) and aoi.shape.radius <= 0:
            issues.append(
                ValidationIssue(
                    "InvalidVolume",
                    f"aoi {aoi.instance_id!r}: sphere radius {aoi.shape.radius}",
                    j,
                )
            )

    return issues
