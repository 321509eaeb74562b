"""Visibility and interactability predicates.

An object is visible when all three hold: its bounds intersect the view
frustum, its nearest bounds point lies within the visibility distance of
the agent's center, and a thick ray from the camera toward that nearest
point reaches the object first with transparent colliders ignored. It is
additionally interactable when the same ray, now blocked by transparent
colliders, still reaches it first - so glass reveals but does not admit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .camera import Camera
from .geometry import Vec3
from .scene import Scene, collider_parts, world_aabb
from .spatial import Bvh, Ray, build_bvh, frustum_contains

DEFAULT_VISIBILITY_DISTANCE = 1.5
THICK_RAY_RADIUS = 0.02
# The visibility ray runs a little past the distance threshold because it
# starts at the camera, not at the agent center the threshold measures from.
RAY_LENGTH_SLACK = 0.2


@dataclass(slots=True)
class VisibilityEntry:
    visible: bool
    interactable: bool
    distance: float


@dataclass(slots=True)
class VisibilityReport:
    entries: dict[str, VisibilityEntry] = field(default_factory=dict)

    def visible(self, object_id: str) -> bool:
        e = self.entries.get(object_id)
        return e.visible if e else False

    def interactable(self, object_id: str) -> bool:
        e = self.entries.get(object_id)
        return e.interactable if e else False

    def distance(self, object_id: str) -> float:
        e = self.entries.get(object_id)
        return e.distance if e else math.inf


def _ray_toward(camera: Camera, target_point: Vec3, max_length: float) -> Ray | None:
    delta = target_point - camera.position
    length = delta.length()
    if length == 0.0:
        return None
    return Ray(
        origin=camera.position,
        direction=delta.scaled(1.0 / length),
        max_length=max_length,
        radius=THICK_RAY_RADIUS,
    )


def _sees(inst, camera: Camera, bvh: Bvh, catalog, max_length: float, pass_transparent: bool) -> bool:
    # Aim at the nearest point of the nearest collider part: receptacle
    # shells are hollow, so the outer bounds' nearest point may be empty
    # air the ray would sail through.
    parts = collider_parts(inst, catalog)
    if not parts:
        return False  # collider disabled (picked up)
    nearest = min(parts, key=lambda p: p.distance_to_point(camera.position))
    aim = nearest.closest_point(camera.position)
    ray = _ray_toward(camera, aim, max_length)
    if ray is None:
        return True  # camera inside the object's collider
    hit = bvh.cast(ray, pass_transparent=pass_transparent, transparent_exempt=inst.object_id)
    return hit is not None and hit.object_id == inst.object_id


def compute_visibility(
    scene: Scene,
    camera: Camera,
    visibility_distance: float = DEFAULT_VISIBILITY_DISTANCE,
    catalog=None,
    bvh: Bvh | None = None,
) -> VisibilityReport:
    """Visibility for every interactable-class instance; ``interactable``
    fields start False and are filled by compute_interactability."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if bvh is None:
        bvh = build_bvh(scene, catalog)
    ray_length = visibility_distance + RAY_LENGTH_SLACK
    center = scene.agent.center()
    report = VisibilityReport()
    for inst in scene.objects:
        box = world_aabb(inst, catalog)
        distance = box.distance_to_point(center)
        visible = (
            frustum_contains(camera, box, far=ray_length)
            and distance <= visibility_distance
            and _sees(inst, camera, bvh, catalog, ray_length, pass_transparent=True)
        )
        report.entries[inst.object_id] = VisibilityEntry(visible=visible, interactable=False, distance=distance)
    return report


def compute_interactability(
    scene: Scene,
    camera: Camera,
    report: VisibilityReport,
    visibility_distance: float = DEFAULT_VISIBILITY_DISTANCE,
    catalog=None,
    bvh: Bvh | None = None,
) -> VisibilityReport:
    """Fill the interactable flags: visible and reachable past transparents."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if bvh is None:
        bvh = build_bvh(scene, catalog)
    ray_length = visibility_distance + RAY_LENGTH_SLACK
    for inst in scene.objects:
        entry = report.entries[inst.object_id]
        entry.interactable = entry.visible and _sees(
            inst, camera, bvh, catalog, ray_length, pass_transparent=False
        )
    return report


def full_visibility(
    scene: Scene,
    camera: Camera,
    visibility_distance: float = DEFAULT_VISIBILITY_DISTANCE,
    catalog=None,
    bvh: Bvh | None = None,
) -> VisibilityReport:
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if bvh is None:
        bvh = build_bvh(scene, catalog)
    report = compute_visibility(scene, camera, visibility_distance, catalog, bvh)
    return compute_interactability(scene, camera, report, visibility_distance, catalog, bvh)


def target_visibility(
    inst,
    scene: Scene,
    camera: Camera,
    visibility_distance: float = DEFAULT_VISIBILITY_DISTANCE,
    catalog=None,
    bvh: Bvh | None = None,
) -> VisibilityEntry:
    """Single-object fast path used by action precondition checks."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if bvh is None:
        bvh = build_bvh(scene, catalog)
    ray_length = visibility_distance + RAY_LENGTH_SLACK
    box = world_aabb(inst, catalog)
    distance = box.distance_to_point(scene.agent.center())
    visible = (
        frustum_contains(camera, box, far=ray_length)
        and distance <= visibility_distance
        and _sees(inst, camera, bvh, catalog, ray_length, pass_transparent=True)
    )
    interactable = visible and _sees(inst, camera, bvh, catalog, ray_length, pass_transparent=False)
    return VisibilityEntry(visible=visible, interactable=interactable, distance=distance)
