"""Primitive geometry: 3D vectors, axis-aligned boxes, yaw rotation.

All world geometry in the simulator is axis-aligned (object yaws are
quantized to 90 degree steps), so boxes stay AABBs under every supported
transform and overlap/distance tests reduce to per-axis interval math.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def length(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.length()
        if n == 0.0:
            raise ValueError("cannot normalize zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in (self.x, self.y, self.z))

    def to_list(self) -> list[float]:
        return [float(self.x), float(self.y), float(self.z)]

    @staticmethod
    def from_list(v) -> "Vec3":
        return Vec3(float(v[0]), float(v[1]), float(v[2]))


ZERO = Vec3(0.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class Aabb:
    min: Vec3
    max: Vec3

    def is_valid(self) -> bool:
        return (
            self.min.is_finite()
            and self.max.is_finite()
            and self.min.x <= self.max.x
            and self.min.y <= self.max.y
            and self.min.z <= self.max.z
        )

    def size(self) -> Vec3:
        return self.max - self.min

    def center(self) -> Vec3:
        return Vec3(
            (self.min.x + self.max.x) * 0.5,
            (self.min.y + self.max.y) * 0.5,
            (self.min.z + self.max.z) * 0.5,
        )

    def translated(self, offset: Vec3) -> "Aabb":
        return Aabb(self.min + offset, self.max + offset)

    def contains_box(self, inner: "Aabb", tol: float = 0.0) -> bool:
        return (
            inner.min.x >= self.min.x - tol
            and inner.min.y >= self.min.y - tol
            and inner.min.z >= self.min.z - tol
            and inner.max.x <= self.max.x + tol
            and inner.max.y <= self.max.y + tol
            and inner.max.z <= self.max.z + tol
        )

    def contains_point(self, p: Vec3) -> bool:
        return (
            self.min.x <= p.x <= self.max.x
            and self.min.y <= p.y <= self.max.y
            and self.min.z <= p.z <= self.max.z
        )

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(
            Vec3(min(self.min.x, other.min.x), min(self.min.y, other.min.y), min(self.min.z, other.min.z)),
            Vec3(max(self.max.x, other.max.x), max(self.max.y, other.max.y), max(self.max.z, other.max.z)),
        )

    def expanded(self, r: float) -> "Aabb":
        return Aabb(
            Vec3(self.min.x - r, self.min.y - r, self.min.z - r),
            Vec3(self.max.x + r, self.max.y + r, self.max.z + r),
        )

    def closest_point(self, p: Vec3) -> Vec3:
        return Vec3(
            min(max(p.x, self.min.x), self.max.x),
            min(max(p.y, self.min.y), self.max.y),
            min(max(p.z, self.min.z), self.max.z),
        )

    def distance_to_point(self, p: Vec3) -> float:
        dx = max(self.min.x - p.x, 0.0, p.x - self.max.x)
        dy = max(self.min.y - p.y, 0.0, p.y - self.max.y)
        dz = max(self.min.z - p.z, 0.0, p.z - self.max.z)
        return math.sqrt(dx * dx + dy * dy + dz * dz)

    def to_dict(self) -> dict:
        return {"min": self.min.to_list(), "max": self.max.to_list()}

    @staticmethod
    def from_dict(d) -> "Aabb":
        return Aabb(Vec3.from_list(d["min"]), Vec3.from_list(d["max"]))


def overlap_depth(a: Aabb, b: Aabb) -> float:
    """Penetration depth between two boxes: the smallest per-axis overlap.

    Returns 0.0 when the boxes are separated or merely touching.
    """
    ox = min(a.max.x, b.max.x) - max(a.min.x, b.min.x)
    oy = min(a.max.y, b.max.y) - max(a.min.y, b.min.y)
    oz = min(a.max.z, b.max.z) - max(a.min.z, b.min.z)
    if ox <= 0.0 or oy <= 0.0 or oz <= 0.0:
        return 0.0
    return min(ox, oy, oz)


def boxes_overlap(a: Aabb, b: Aabb) -> bool:
    return (
        a.min.x < b.max.x
        and b.min.x < a.max.x
        and a.min.y < b.max.y
        and b.min.y < a.max.y
        and a.min.z < b.max.z
        and b.min.z < a.max.z
    )


# Exact sines for the quantized angle grid (multiples of 30 degrees).
# Built from sqrt so every host computes bit-identical values; math.sin
# would pull in libm and risk cross-platform drift.
_SIN_TABLE = {
    0: 0.0,
    30: 0.5,
    60: math.sqrt(3.0) / 2.0,
    90: 1.0,
    120: math.sqrt(3.0) / 2.0,
    150: 0.5,
    180: 0.0,
    210: -0.5,
    240: -math.sqrt(3.0) / 2.0,
    270: -1.0,
    300: -math.sqrt(3.0) / 2.0,
    330: -0.5,
}


def sin_deg(angle: float) -> float:
    """Sine of an angle that is a multiple of 30 degrees, exactly."""
    a = int(round(angle)) % 360
    if a not in _SIN_TABLE:
        raise ValueError(f"angle {angle} not on the 30-degree grid")
    return _SIN_TABLE[a]


def cos_deg(angle: float) -> float:
    return sin_deg(angle + 90)


def rotate_yaw(v: Vec3, yaw_deg: float) -> Vec3:
    """Rotate about +y. 90 degree steps map axes exactly (no rounding)."""
    s, c = sin_deg(yaw_deg), cos_deg(yaw_deg)
    return Vec3(c * v.x + s * v.z, v.y, -s * v.x + c * v.z)


def rotate_box_yaw(box: Aabb, yaw_deg: float) -> Aabb:
    """Rotate a local-frame box about the +y axis through the origin.

    Only multiples of 90 degrees are permitted, which keeps the result
    axis-aligned and exact.
    """
    if int(round(yaw_deg)) % 90 != 0:
        raise ValueError(f"box yaw must be a multiple of 90, got {yaw_deg}")
    a = rotate_yaw(box.min, yaw_deg)
    b = rotate_yaw(box.max, yaw_deg)
    return Aabb(
        Vec3(min(a.x, b.x), min(a.y, b.y), min(a.z, b.z)),
        Vec3(max(a.x, b.x), max(a.y, b.y), max(a.z, b.z)),
    )


def yaw_forward(yaw_deg: float) -> Vec3:
    """Unit facing vector for a yaw angle; yaw 0 faces +z, yaw 90 faces +x."""
    return Vec3(sin_deg(yaw_deg), 0.0, cos_deg(yaw_deg))
