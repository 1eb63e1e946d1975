"""Parsing and synchronization of the two input streams.

Gaze comes as CSV with a fixed header; AOI detections come as JSONL, one
object per line. Malformed rows become issues, not aborts, except for a
missing CSV header which is fatal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .model import (
    NORMALIZE_TOL,
    AOIInstance,
    BoundingVolume,
    Box,
    GazeSample,
    Recording,
    Sphere,
    ValidationIssue,
    Vec3,
    vnorm,
)

GAZE_HEADER = "timestamp_ms,valid,ox,oy,oz,dx,dy,dz"

#: one detection frame at ~20 Hz on-device inference
DEFAULT_WINDOW_MS = 50


class MissingHeaderError(ValueError):
    """The gaze CSV does not start with the canonical header line."""


@dataclass(frozen=True)
class Detection:
    """One detector output frame for one object instance."""

    timestamp_ms: int
    instance_id: str
    label: str
    confidence: float
    virtual: bool
    shape: BoundingVolume


def parse_gaze_csv(text: str) -> tuple[list[GazeSample], list[ValidationIssue]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != GAZE_HEADER:
        raise MissingHeaderError(f"expected header {GAZE_HEADER!r}")

    samples: list[GazeSample] = []
    issues: list[ValidationIssue] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 8:
            issues.append(
                ValidationIssue("RowParse", f"line {lineno}: expected 8 columns, got {len(parts)}", lineno)
            )
            continue
        try:
            t = int(parts[0])
            valid = bool(int(parts[1]))
            nums = [float(p) for p in parts[2:]]
        except ValueError as exc:
            issues.append(ValidationIssue("RowParse", f"line {lineno}: {exc}", lineno))
            continue
        if not valid:
            samples.append(GazeSample(t, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), False))
            continue
        origin: Vec3 = (nums[0], nums[1], nums[2])
        direction: Vec3 = (nums[3], nums[4], nums[5])
        n = vnorm(direction)
        if abs(n - 1.0) <= 1e-8:
            pass  # already unit; leave bytes untouched for round-trip fidelity
        elif abs(n - 1.0) <= NORMALIZE_TOL and n > 0.0:
            direction = (direction[0] / n, direction[1] / n, direction[2] / n)
        else:
            issues.append(
                ValidationIssue("NonUnitDirection", f"line {lineno}: |direction| = {n:.6g}", lineno)
            )
        samples.append(GazeSample(t, origin, direction, True))
    return samples, issues


def _fmt(x: float) -> str:
    if x == math.floor(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.9g}"


def write_gaze_csv(samples: list[GazeSample]) -> str:
    lines = [GAZE_HEADER]
    for s in samples:
        vals = [_fmt(v) for v in (*s.origin, *s.direction)]
        lines.append(f"{s.timestamp_ms},{int(s.valid)},{','.join(vals)}")
    return "\n".join(lines) + "\n"


def _parse_shape(obj: dict) -> BoundingVolume:
    kind = obj.get("type")
    if kind == "aabb":
        lo, hi = obj["min"], obj["max"]
        return Box((float(lo[0]), float(lo[1]), float(lo[2])), (float(hi[0]), float(hi[1]), float(hi[2])))
    if kind == "sphere":
        c = obj["center"]
        return Sphere((float(c[0]), float(c[1]), float(c[2])), float(obj["radius"]))
    raise KeyError(f"unsupported shape type {kind!r}")


def parse_detections(text: str) -> tuple[list[Detection], list[ValidationIssue]]:
    detections: list[Detection] = []
    issues: list[ValidationIssue] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            issues.append(ValidationIssue("LineParse", f"line {lineno}: {exc}", lineno))
            continue
        try:
            shape = _parse_shape(obj["shape"])
        except KeyError as exc:
            code = "UnsupportedShape" if "shape type" in str(exc) else "LineParse"
            issues.append(ValidationIssue(code, f"line {lineno}: {exc}", lineno))
            continue
        try:
            det = Detection(
                timestamp_ms=int(obj["timestamp_ms"]),
                instance_id=str(obj["instance_id"]),
                label=str(obj["label"]),
                confidence=float(obj["confidence"]),
                virtual=bool(obj["virtual"]),
                shape=shape,
            )
        except (KeyError, ValueError, TypeError) as exc:
            issues.append(ValidationIssue("LineParse", f"line {lineno}: {exc}", lineno))
            continue
        if not (0.0 <= det.confidence <= 1.0):
            # kept in the stream; validate_recording reports it again downstream
            issues.append(
                ValidationIssue(
                    "ConfidenceOutOfRange", f"line {lineno}: confidence {det.confidence}", lineno
                )
            )
        detections.append(det)
    return detections, issues


def write_detections(detections: list[Detection]) -> str:
    lines = []
    for d in detections:
        if isinstance(d.shape, Box):
            shape = {"type": "aabb", "min": list(d.shape.min), "max": list(d.shape.max)}
        else:
            shape = {"type": "sphere", "center": list(d.shape.center), "radius": d.shape.radius}
        obj = {
            "timestamp_ms": d.timestamp_ms,
            "instance_id": d.instance_id,
            "label": d.label,
            "confidence": float(f"{d.confidence:.9g}"),
            "virtual": d.virtual,
            "shape": shape,
        }
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def synchronize(
    samples: list[GazeSample],
    detections: list[Detection],
    window_ms: int = DEFAULT_WINDOW_MS,
    meta: dict[str, str] | None = None,
) -> Recording:
    """Stitch per-frame detections into AOI instances with active spans.

    Consecutive detections of the same instance_id merge while their gap is
    <= window_ms; larger gaps split the instance, with later pieces suffixed
    (#2, #3, ...) to keep ids unique. The per-detection confidence series is
    retained for render-time aggregation.
    """
    ordered = sorted(detections, key=lambda d: (d.timestamp_ms, d.instance_id))
    groups: dict[str, list[Detection]] = {}
    id_order: list[str] = []
    for det in ordered:
        if det.instance_id not in groups:
            groups[det.instance_id] = []
            id_order.append(det.instance_id)
        groups[det.instance_id].append(det)

    aois: list[AOIInstance] = []
    for instance_id in id_order:
        runs: list[list[Detection]] = [[]]
        for det in groups[instance_id]:
            if runs[-1] and det.timestamp_ms - runs[-1][-1].timestamp_ms > window_ms:
                runs.append([])
            runs[-1].append(det)
        for k, run in enumerate(runs):
            uid = instance_id if k == 0 else f"{instance_id}#{k + 1}"
            series = tuple((d.timestamp_ms, d.confidence) for d in run)
            mean_conf = sum(c for _, c in series) / len(series)
            first = run[0]
            aois.append(
                AOIInstance(
                    instance_id=uid,
                    label=first.label,
                    shape=first.shape,
                    confidence=mean_conf,
                    virtual=first.virtual,
                    t_start_ms=run[0].timestamp_ms,
                    t_end_ms=run[-1].timestamp_ms,
                    confidence_series=series,
                )
            )

    base_meta = {"time_unit": "ms", "space_unit": "m", "window_ms": str(window_ms)}
    if meta:
        base_meta.update(meta)
    return Recording(samples=tuple(samples), aois=tuple(aois), meta=base_meta)
