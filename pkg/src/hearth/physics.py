"""Translation-only rigid motion for movable objects.

Semi-implicit Euler at a fixed 0.02 s step: gravity accelerates, positions
advance, penetrations are projected out along the smallest-overlap axis
with the normal velocity killed (restitution-scaled), and supported
objects lose tangential speed to Coulomb friction. Yaw never changes, so
every collider stays an AABB and the whole update is a deterministic
function of the scene bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Aabb, Vec3
from .scene import FLOOR_ID, SKIN, Scene, scene_colliders, world_aabb


@dataclass(frozen=True, slots=True)
class PhysicsConfig:
    dt: float = 0.02
    gravity: float = 9.81
    max_settle_steps: int = 200
    rest_speed: float = 1e-3


DEFAULT_PHYSICS = PhysicsConfig()

_RESOLVE_PASSES = 4
# Per-substep travel cap; keeps penetrations shallower than the thinnest
# structural collider (half a wall) so nothing tunnels out of the room.
_MAX_STEP_TRAVEL = 0.04
# Impulses cannot accelerate an object past this; bounds substep count.
MAX_SPEED = 12.0


def _speed(v: Vec3) -> float:
    return v.length()


def _is_dynamic(inst, cls) -> bool:
    # Contained objects only move when something gave them velocity; this
    # keeps receptacle contents pinned during unrelated settling.
    if not cls.movable or inst.is_picked_up:
        return False
    return inst.parent_receptacle is None or _speed(inst.velocity) > 0.0


def _overlaps(a: Aabb, b: Aabb) -> tuple[float, float, float] | None:
    ox = min(a.max.x, b.max.x) - max(a.min.x, b.min.x)
    oy = min(a.max.y, b.max.y) - max(a.min.y, b.min.y)
    oz = min(a.max.z, b.max.z) - max(a.min.z, b.min.z)
    if ox <= 0.0 or oy <= 0.0 or oz <= 0.0:
        return None
    return ox, oy, oz


def _push_axis(c, box: Aabb, ov: tuple[float, float, float], room_center: Vec3) -> tuple[str, float]:
    """(axis name, signed shift) that moves the box out of collider c.

    The floor only ever pushes up and walls only push toward the room, so
    no resolution can eject an object from the world. Everything else uses
    the smallest-overlap axis, away from the obstacle's center.
    """
    ox, oy, oz = ov
    if c.owner == FLOOR_ID:
        return "y", oy
    if c.owner.startswith("Wall_"):
        if (c.box.max.x - c.box.min.x) <= (c.box.max.z - c.box.min.z):
            sign = 1.0 if room_center.x >= c.box.center().x else -1.0
            return "x", sign * ox
        sign = 1.0 if room_center.z >= c.box.center().z else -1.0
        return "z", sign * oz
    axis = "x" if ox <= oy and ox <= oz else ("y" if oy <= oz else "z")
    overlap = {"x": ox, "y": oy, "z": oz}[axis]
    sign = 1.0 if getattr(box.center(), axis) >= getattr(c.box.center(), axis) else -1.0
    return axis, sign * overlap


def _resolve(inst, box: Aabb, obstacles, restitution: float, room_center: Vec3) -> Aabb:
    """Project the instance out of any penetrations, zeroing the normal
    velocity component (scaled by -restitution when bouncing)."""
    for _ in range(_RESOLVE_PASSES):
        deepest = None
        deepest_key = None
        for c in obstacles:
            ov = _overlaps(box, c.box)
            if ov is None:
                continue
            depth = min(ov)
            key = (-depth, c.owner)
            if deepest_key is None or key < deepest_key:
                deepest_key = key
                deepest = (c, ov)
        if deepest is None:
            break
        c, ov = deepest
        axis, shift = _push_axis(c, box, ov, room_center)
        pos = inst.position
        delta = {"x": 0.0, "y": 0.0, "z": 0.0}
        delta[axis] = shift
        inst.position = Vec3(pos.x + delta["x"], pos.y + delta["y"], pos.z + delta["z"])
        box = box.translated(Vec3(delta["x"], delta["y"], delta["z"]))
        vel = getattr(inst.velocity, axis)
        if vel * shift < 0.0:  # moving into the surface
            new_v = {"x": inst.velocity.x, "y": inst.velocity.y, "z": inst.velocity.z}
            new_v[axis] = -restitution * vel
            inst.velocity = Vec3(new_v["x"], new_v["y"], new_v["z"])
    return box


def _is_supported(box: Aabb, obstacles) -> bool:
    for c in obstacles:
        if abs(box.min.y - c.box.max.y) <= SKIN:
            if (
                box.min.x < c.box.max.x
                and c.box.min.x < box.max.x
                and box.min.z < c.box.max.z
                and c.box.min.z < box.max.z
            ):
                return True
    return False


def integrate_step(scene: Scene, catalog=None, cfg: PhysicsConfig = DEFAULT_PHYSICS) -> Scene:
    """Advance every dynamic object by one fixed timestep, in place.

    Position advances are substepped so per-substep travel stays below the
    tunneling threshold; velocity updates (gravity, friction, restitution)
    happen once per full step, keeping the closed-form test values intact.
    """
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    colliders = scene_colliders(scene, catalog)
    room_center = scene.floor_bounds.center()
    for inst in scene.objects:
        cls = catalog.get(inst.category)
        if not _is_dynamic(inst, cls):
            continue
        obstacles = [c for c in colliders if c.owner != inst.object_id]
        v = inst.velocity
        v = Vec3(v.x, v.y - cfg.gravity * cfg.dt, v.z)
        speed = _speed(v)
        if speed > MAX_SPEED:
            v = v.scaled(MAX_SPEED / speed)
            speed = MAX_SPEED
        inst.velocity = v
        travel = speed * cfg.dt
        substeps = max(1, math.ceil(travel / _MAX_STEP_TRAVEL))
        box = world_aabb(inst, catalog)
        for _ in range(substeps):
            delta = inst.velocity.scaled(cfg.dt / substeps)
            inst.position = inst.position + delta
            box = box.translated(delta)
            box = _resolve(inst, box, obstacles, cls.restitution, room_center)
        if inst.velocity.y == 0.0 and _is_supported(box, obstacles):
            vx, vz = inst.velocity.x, inst.velocity.z
            h = (vx * vx + vz * vz) ** 0.5
            if h > 0.0:
                decel = cls.friction_coeff * cfg.gravity * cfg.dt
                scale = max(h - decel, 0.0) / h
                inst.velocity = Vec3(vx * scale, 0.0, vz * scale)
        if _speed(inst.velocity) < cfg.rest_speed:
            inst.velocity = Vec3(0.0, 0.0, 0.0)
    return scene


def refresh_containment(scene: Scene, catalog=None) -> None:
    """Re-derive parent links after geometry changed.

    Objects whose bounds left their receptacle's interior are unlinked
    (a microwave door opened over the counter edge, a pushed mug that
    escaped); parentless objects fully inside an interior link to the
    smallest receptacle that contains them, so a mug in a microwave on a
    countertop belongs to the microwave, not the countertop.
    """
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    from .scene import interior_world

    interiors = []
    for inst in scene.objects:
        if catalog.get(inst.category).receptacle and not inst.is_picked_up:
            interior = interior_world(inst, catalog)
            size = interior.size()
            interiors.append((size.x * size.y * size.z, inst.object_id, inst, interior))
    interiors.sort(key=lambda item: (item[0], item[1]))
    by_id = {o.object_id: o for o in scene.objects}
    for inst in scene.objects:
        if inst.is_picked_up:
            continue
        box = world_aabb(inst, catalog)
        if inst.parent_receptacle is not None:
            parent = by_id.get(inst.parent_receptacle)
            if parent is not None and interior_world(parent, catalog).contains_box(box, 1e-6):
                continue
            if parent is not None and inst.object_id in parent.contained_ids:
                parent.contained_ids.remove(inst.object_id)
            inst.parent_receptacle = None
        for _, _, r, interior in interiors:
            if r.object_id == inst.object_id:
                continue
            if interior.contains_box(box, 1e-6):
                inst.parent_receptacle = r.object_id
                if inst.object_id not in r.contained_ids:
                    r.contained_ids.append(inst.object_id)
                    r.contained_ids.sort()
                break


def settle(scene: Scene, catalog=None, cfg: PhysicsConfig = DEFAULT_PHYSICS) -> tuple[Scene, int]:
    """Integrate until every movable is below the rest speed (or the step
    cap is hit), then snap containment links. Returns (scene, steps run)."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    steps = 0
    while steps < cfg.max_settle_steps:
        integrate_step(scene, catalog, cfg)
        steps += 1
        if all(
            _speed(inst.velocity) < cfg.rest_speed
            for inst in scene.objects
            if catalog.get(inst.category).movable
        ):
            break
    refresh_containment(scene, catalog)
    return scene, steps


def apply_impulse(inst, cls, magnitude: float, direction: Vec3) -> None:
    """Instant impulse in Newton-seconds: dv = J / m along the direction."""
    dv = direction.scaled(magnitude / cls.mass)
    inst.velocity = inst.velocity + dv
