"""Synthetic desk-scale scenes with scripted gaze orders.

Four built-in scenes reproduce the qualitative uncertainty situations used
for acceptance: depth-staggered duplicate labels (BB), a physical object
between two virtual ones (VP_B_VB), two virtual objects with a false
positive occluder (VP_VB), and objects at equal depth (VP_C_VB).

Generation is fully seeded: the same script yields byte-identical logs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .ingest import Detection, synchronize
from .model import Box, BoundingVolume, GazeSample, Recording, Vec3

SCENE_IDS = ("BB", "VP_B_VB", "VP_VB", "VP_C_VB")

DEFAULT_SIGMA_RAD = math.radians(0.5)  # within the ~2 degree foveal envelope

TP_CONFIDENCE = (0.75, 0.95)
FP_CONFIDENCE = (0.25, 0.45)


@dataclass(frozen=True)
class SceneAOI:
    instance_id: str
    label: str
    shape: BoundingVolume
    virtual: bool
    false_positive: bool = False


@dataclass(frozen=True)
class Waypoint:
    name: str
    target: Vec3
    dwell_ms: int
    expected_label: Optional[str]  # intended gaze target
    expected_hit: Optional[str]  # instance the noise-free ray hits first


@dataclass(frozen=True)
class SceneScript:
    scene_id: str
    aois: tuple[SceneAOI, ...]
    waypoints: tuple[Waypoint, ...]
    eye_origin: Vec3 = (0.0, 0.0, 0.0)
    sample_rate_hz: float = 60.0
    detection_rate_hz: float = 20.0
    noise_sigma_rad: float = DEFAULT_SIGMA_RAD
    seed: int = 0
    gap_ms: int = 120  # invalid-gaze gap between dwells; renders as white space


@dataclass(frozen=True)
class GroundTruth:
    """Per-sample intent: which waypoint was active and what it aimed at.
    Entries are None during the invalid gaps between dwells."""

    waypoint_names: tuple[Optional[str], ...]
    expected_labels: tuple[Optional[str], ...]
    expected_hits: tuple[Optional[str], ...]

    def dwell_ms_for_label(self, recording: Recording, label: str) -> int:
        """Total segment duration of samples aimed at the given label."""
        period = recording.nominal_period_ms()
        samples = recording.samples
        total = 0
        for i, expected in enumerate(self.expected_labels):
            if expected != label:
                continue
            end = samples[i + 1].timestamp_ms if i + 1 < len(samples) else samples[i].timestamp_ms + period
            total += end - samples[i].timestamp_ms
        return total


def _box(center: Vec3, half: Vec3) -> Box:
    return Box(
        (center[0] - half[0], center[1] - half[1], center[2] - half[2]),
        (center[0] + half[0], center[1] + half[1], center[2] + half[2]),
    )


def builtin_scripts() -> dict[str, SceneScript]:
    scripts: dict[str, SceneScript] = {}

    # BB: two bottles at different depths, identical labels; the overlap
    # waypoint aims through the front box at the back one.
    front = SceneAOI("bottle-front", "bottle", _box((0.0, 0.0, 1.0), (0.08, 0.15, 0.05)), False)
    back = SceneAOI("bottle-back", "bottle", _box((0.10, 0.0, 1.6), (0.08, 0.15, 0.05)), False)
    scripts["BB"] = SceneScript(
        scene_id="BB",
        aois=(front, back),
        waypoints=(
            Waypoint("overlap", (0.10, 0.0, 1.6), 1500, "bottle", "bottle-front"),
            Waypoint("front", (0.0, 0.0, 1.0), 1500, "bottle", "bottle-front"),
            Waypoint("back", (0.17, 0.0, 1.6), 1500, "bottle", "bottle-back"),
        ),
    )

    # VP_B_VB: physical bottle between two virtual objects; neighbors sit
    # just inside the default NN threshold of rays at the bottle.
    plant = SceneAOI("plant-1", "plant", _box((-0.18, 0.0, 0.8), (0.09, 0.12, 0.08)), True)
    bottle = SceneAOI("bottle-1", "bottle", _box((0.0, 0.0, 1.3), (0.07, 0.16, 0.06)), False)
    bust = SceneAOI("bust-1", "bust", _box((0.18, 0.0, 1.9), (0.10, 0.14, 0.10)), True)
    scripts["VP_B_VB"] = SceneScript(
        scene_id="VP_B_VB",
        aois=(plant, bottle, bust),
        waypoints=(
            Waypoint("plant", (-0.18, 0.0, 0.8), 1200, "plant", "plant-1"),
            Waypoint("bottle", (0.0, 0.0, 1.3), 1200, "bottle", "bottle-1"),
            Waypoint("bust", (0.18, 0.0, 1.9), 1200, "bust", "bust-1"),
            Waypoint("bottle", (0.0, 0.0, 1.3), 1200, "bottle", "bottle-1"),
            Waypoint("plant", (-0.18, 0.0, 0.8), 1200, "plant", "plant-1"),
        ),
    )

    # VP_VB: two virtual objects plus a false-positive Book box detected in
    # front of the bust, occluding every noise-free ray to the bust center.
    plant2 = SceneAOI("plant-1", "plant", _box((-0.15, 0.0, 0.8), (0.10, 0.15, 0.08)), True)
    bust2 = SceneAOI("bust-1", "bust", _box((0.10, 0.0, 1.8), (0.12, 0.20, 0.10)), True)
    book = SceneAOI(
        "book-1", "Book", _box((0.07, 0.0, 1.3), (0.10, 0.12, 0.04)), False, false_positive=True
    )
    scripts["VP_VB"] = SceneScript(
        scene_id="VP_VB",
        aois=(plant2, bust2, book),
        waypoints=(
            Waypoint("plant", (-0.15, 0.0, 0.8), 1500, "plant", "plant-1"),
            Waypoint("bust", (0.10, 0.0, 1.8), 1500, "bust", "book-1"),
            Waypoint("plant", (-0.15, 0.0, 0.8), 1500, "plant", "plant-1"),
            Waypoint("bust", (0.10, 0.0, 1.8), 1500, "bust", "book-1"),
        ),
    )

    # VP_C_VB: cup and plant at equal depth, bust behind; little overlap or
    # proximity, so all three plot variants stay similar.
    cup = SceneAOI("cup-1", "cup", _box((-0.25, 0.0, 0.9), (0.05, 0.08, 0.05)), False)
    plant3 = SceneAOI("plant-1", "plant", _box((0.25, 0.0, 0.9), (0.09, 0.12, 0.08)), True)
    bust3 = SceneAOI("bust-1", "bust", _box((0.0, 0.0, 1.8), (0.12, 0.20, 0.10)), True)
    scripts["VP_C_VB"] = SceneScript(
        scene_id="VP_C_VB",
        aois=(cup, plant3, bust3),
        waypoints=(
            Waypoint("plant", (0.25, 0.0, 0.9), 1200, "plant", "plant-1"),
            Waypoint("cup", (-0.25, 0.0, 0.9), 1200, "cup", "cup-1"),
            Waypoint("bust", (0.0, 0.0, 1.8), 1200, "bust", "bust-1"),
            Waypoint("cup", (-0.25, 0.0, 0.9), 1200, "cup", "cup-1"),
            Waypoint("plant", (0.25, 0.0, 0.9), 1200, "plant", "plant-1"),
        ),
    )
    return scripts


def _normalize(v: Vec3) -> Vec3:
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    return (v[0] / n, v[1] / n, v[2] / n)


def _perturb(direction: Vec3, sigma_rad: float, rng: random.Random) -> Vec3:
    """Small-angle angular jitter: add a seeded Gaussian offset orthogonal to
    the direction and renormalize."""
    if sigma_rad <= 0.0:
        return direction
    # orthonormal basis around the direction
    ref = (0.0, 1.0, 0.0) if abs(direction[1]) < 0.9 else (1.0, 0.0, 0.0)
    u = _normalize(
        (
            direction[1] * ref[2] - direction[2] * ref[1],
            direction[2] * ref[0] - direction[0] * ref[2],
            direction[0] * ref[1] - direction[1] * ref[0],
        )
    )
    w = (
        direction[1] * u[2] - direction[2] * u[1],
        direction[2] * u[0] - direction[0] * u[2],
        direction[0] * u[1] - direction[1] * u[0],
    )
    a = rng.gauss(0.0, sigma_rad)
    b = rng.gauss(0.0, sigma_rad)
    return _normalize(
        (
            direction[0] + a * u[0] + b * w[0],
            direction[1] + a * u[1] + b * w[1],
            direction[2] + a * u[2] + b * w[2],
        )
    )


def generate(script: SceneScript) -> tuple[Recording, GroundTruth]:
    if script.sample_rate_hz <= 0 or script.detection_rate_hz <= 0:
        raise ValueError("rates must be positive")
    rng = random.Random(script.seed)

    samples: list[GazeSample] = []
    names: list[Optional[str]] = []
    labels: list[Optional[str]] = []
    hits: list[Optional[str]] = []

    schedule: list[tuple[Optional[Waypoint], int]] = []
    for i, wp in enumerate(script.waypoints):
        schedule.append((wp, wp.dwell_ms))
        if script.gap_ms > 0 and i + 1 < len(script.waypoints):
            schedule.append((None, script.gap_ms))

    index = 0
    elapsed = 0
    for wp, span_ms in schedule:
        n = max(1, round(span_ms * script.sample_rate_hz / 1000.0))
        for _ in range(n):
            t = round(index * 1000.0 / script.sample_rate_hz)
            if wp is None:
                samples.append(GazeSample(t, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), False))
                names.append(None)
                labels.append(None)
                hits.append(None)
            else:
                o = script.eye_origin
                ideal = _normalize(
                    (wp.target[0] - o[0], wp.target[1] - o[1], wp.target[2] - o[2])
                )
                samples.append(
                    GazeSample(t, o, _perturb(ideal, script.noise_sigma_rad, rng), True)
                )
                names.append(wp.name)
                labels.append(wp.expected_label)
                hits.append(wp.expected_hit)
            index += 1
        elapsed += span_ms

    total_ms = samples[-1].timestamp_ms if samples else 0
    detections: list[Detection] = []
    det_period = 1000.0 / script.detection_rate_hz
    k = 0
    while True:
        t = round(k * det_period)
        if t > total_ms:
            break
        for aoi in script.aois:
            lo, hi = FP_CONFIDENCE if aoi.false_positive else TP_CONFIDENCE
            conf = rng.uniform(lo, hi)
            detections.append(
                Detection(t, aoi.instance_id, aoi.label, conf, aoi.virtual, aoi.shape)
            )
        k += 1

    recording = synchronize(
        samples,
        detections,
        meta={"scene_id": script.scene_id, "seed": str(script.seed)},
    )
    return recording, GroundTruth(tuple(names), tuple(labels), tuple(hits))


def script_with(script: SceneScript, **overrides) -> SceneScript:
    return replace(script, **overrides)
