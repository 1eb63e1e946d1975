"""Ray/volume geometry kernel.

The gaze ray is a half-line: parameters are clamped to t >= 0, since gaze
cannot hit objects behind the eye. Intersection comparisons use the exact
semantics of the floating type with no epsilon inflation; positional
uncertainty is handled by the NN mapping, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .model import AOIInstance, BoundingVolume, Box, Sphere, Vec3, aoi_center


@dataclass(frozen=True)
class Ray:
    origin: Vec3
    direction: Vec3  # unit length


@dataclass(frozen=True)
class HitRecord:
    instance_id: str
    t_entry: float
    t_exit: float


@dataclass(frozen=True)
class ProximityRecord:
    instance_id: str
    d: float
    closest_point_on_ray: Vec3
    t_closest: float


def closest_point_on_ray(ray: Ray, p: Vec3) -> tuple[Vec3, float, float]:
    """Closest point to p on the half-line; returns (point, t, distance)."""
    o, u = ray.origin, ray.direction
    rel = (p[0] - o[0], p[1] - o[1], p[2] - o[2])
    t = max(0.0, rel[0] * u[0] + rel[1] * u[1] + rel[2] * u[2])
    point = (o[0] + t * u[0], o[1] + t * u[1], o[2] + t * u[2])
    d = math.dist(p, point)
    return point, t, d


def intersect_box(ray: Ray, box: Box) -> Optional[tuple[float, float]]:
    """Slab-method ray/AABB test, clamped to t >= 0.

    A zero direction component rejects unless the origin lies within that
    slab. Degenerate boxes (min == max on an axis) are zero-thickness slabs.
    """
    t_min, t_max = 0.0, math.inf
    for a in range(3):
        o, d = ray.origin[a], ray.direction[a]
        lo, hi = box.min[a], box.max[a]
        if d == 0.0:
            if o < lo or o > hi:
                return None
            continue
        inv = 1.0 / d
        t0 = (lo - o) * inv
        t1 = (hi - o) * inv
        if t0 > t1:
            t0, t1 = t1, t0
        if t0 > t_min:
            t_min = t0
        if t1 < t_max:
            t_max = t1
        if t_min > t_max:
            return None
    return (t_min, t_max)


def intersect_sphere(ray: Ray, sphere: Sphere) -> Optional[tuple[float, float]]:
    """Quadratic ray/sphere test, clamped to t >= 0. Tangency yields
    t_entry == t_exit."""
    o, u = ray.origin, ray.direction
    c = sphere.center
    oc = (o[0] - c[0], o[1] - c[1], o[2] - c[2])
    # |direction| = 1, so a = 1
    b = oc[0] * u[0] + oc[1] * u[1] + oc[2] * u[2]
    q = oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - sphere.radius * sphere.radius
    disc = b * b - q
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    t0 = -b - root
    t1 = -b + root
    if t1 < 0.0:
        return None
    return (max(0.0, t0), t1)


def intersect_volume(ray: Ray, volume: BoundingVolume) -> Optional[tuple[float, float]]:
    if isinstance(volume, Box):
        return intersect_box(ray, volume)
    if isinstance(volume, Sphere):
        return intersect_sphere(ray, volume)
    raise TypeError(f"not a bounding volume: {volume!r}")


def proximity(ray: Ray, aoi: AOIInstance) -> ProximityRecord:
    """Distance between the ray and the AOI center (not its surface)."""
    point, t, d = closest_point_on_ray(ray, aoi_center(aoi.shape))
    return ProximityRecord(aoi.instance_id, d, point, t)
