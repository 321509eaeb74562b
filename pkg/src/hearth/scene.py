"""World state model: object instances, the agent, scenes, and validation.

Collider model: every enabled collider is a world-frame AABB. Plain objects
contribute one box. Receptacles are decomposed into shell slabs around
their interior volume, so contained objects sit inside a real cavity:
closed openable receptacles are sealed on all six sides (contents occluded
and unreachable), open ones expose the cavity through the front face, and
open-top receptacles (sinks, tabletops) are always accessible from above.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import Violation
from .geometry import Aabb, Vec3, overlap_depth, rotate_box_yaw

# Overlap slack for all penetration tests, in meters. Placements may touch;
# anything deeper than this is a violation.
SKIN = 0.005

ROOM_CATEGORIES = ("kitchen", "livingroom", "bedroom", "bathroom")

AGENT_RADIUS = 0.2
AGENT_HEIGHT = 1.8

_YAWS = (0, 90, 180, 270)
_HORIZONS = (-30, 0, 30, 60)


@dataclass(slots=True)
class ObjectInstance:
    object_id: str
    category: str
    variant_index: int = 0
    position: Vec3 = field(default_factory=Vec3)
    rotation_yaw: int = 0
    is_open: bool = False
    is_toggled: bool = False
    is_sliced: bool = False
    is_picked_up: bool = False
    parent_receptacle: str | None = None
    contained_ids: list[str] = field(default_factory=list)
    velocity: Vec3 = field(default_factory=Vec3)

    def copy(self) -> "ObjectInstance":
        return replace(self, contained_ids=list(self.contained_ids))


@dataclass(slots=True)
class AgentState:
    agent_id: int = 0
    position: Vec3 = field(default_factory=Vec3)
    rotation_yaw: int = 0
    camera_horizon: int = 0
    held_object_id: str | None = None
    capsule_radius: float = AGENT_RADIUS
    capsule_height: float = AGENT_HEIGHT

    def center(self) -> Vec3:
        """Capsule axis midpoint; the reference point for visibility range."""
        return Vec3(self.position.x, self.position.y + self.capsule_height / 2, self.position.z)

    def axis_segment(self) -> tuple[Vec3, Vec3]:
        """Endpoints of the capsule's core segment (sphere centers)."""
        r = self.capsule_radius
        return (
            Vec3(self.position.x, self.position.y + r, self.position.z),
            Vec3(self.position.x, self.position.y + self.capsule_height - r, self.position.z),
        )

    def copy(self) -> "AgentState":
        return replace(self)


@dataclass(slots=True)
class Scene:
    scene_number: int
    room_category: str
    floor_bounds: Aabb
    walls: list[Aabb]
    objects: list[ObjectInstance]
    props: list[ObjectInstance]
    agent: AgentState
    seed: int = 0

    def copy(self) -> "Scene":
        return Scene(
            scene_number=self.scene_number,
            room_category=self.room_category,
            floor_bounds=self.floor_bounds,
            walls=list(self.walls),
            objects=[o.copy() for o in self.objects],
            props=[p.copy() for p in self.props],
            agent=self.agent.copy(),
            seed=self.seed,
        )

    def find(self, object_id: str) -> ObjectInstance | None:
        for inst in self.objects:
            if inst.object_id == object_id:
                return inst
        return None

    def all_instances(self) -> list[ObjectInstance]:
        return self.objects + self.props


@dataclass(frozen=True, slots=True)
class Collider:
    owner: str
    box: Aabb
    transparent: bool = False


def shell_parts(outer: Aabb, hollow: Aabb) -> list[Aabb]:
    """Decompose outer minus hollow into up to six solid slabs."""
    eps = 1e-9
    parts = []
    if hollow.min.y > outer.min.y + eps:
        parts.append(Aabb(outer.min, Vec3(outer.max.x, hollow.min.y, outer.max.z)))
    if hollow.max.y < outer.max.y - eps:
        parts.append(Aabb(Vec3(outer.min.x, hollow.max.y, outer.min.z), outer.max))
    y0, y1 = max(hollow.min.y, outer.min.y), min(hollow.max.y, outer.max.y)
    if y1 > y0 + eps:
        if hollow.min.x > outer.min.x + eps:
            parts.append(Aabb(Vec3(outer.min.x, y0, outer.min.z), Vec3(hollow.min.x, y1, outer.max.z)))
        if hollow.max.x < outer.max.x - eps:
            parts.append(Aabb(Vec3(hollow.max.x, y0, outer.min.z), Vec3(outer.max.x, y1, outer.max.z)))
        x0, x1 = max(hollow.min.x, outer.min.x), min(hollow.max.x, outer.max.x)
        if x1 > x0 + eps:
            if hollow.min.z > outer.min.z + eps:
                parts.append(Aabb(Vec3(x0, y0, outer.min.z), Vec3(x1, y1, hollow.min.z)))
            if hollow.max.z < outer.max.z - eps:
                parts.append(Aabb(Vec3(x0, y0, hollow.max.z), Vec3(x1, y1, outer.max.z)))
    return parts


def _local_outer(cls, inst: ObjectInstance) -> Aabb:
    if inst.is_open and cls.open_extents is not None:
        return cls.open_for_variant(inst.variant_index)
    return cls.closed_for_variant(inst.variant_index)


def world_aabb(inst: ObjectInstance, catalog) -> Aabb:
    """Overall world-frame bounds of the instance's current collider box."""
    cls = catalog.get(inst.category)
    local = _local_outer(cls, inst)
    return rotate_box_yaw(local, inst.rotation_yaw).translated(inst.position)


def collider_parts(inst: ObjectInstance, catalog) -> list[Aabb]:
    """Enabled world-frame collider boxes for one instance.

    Picked-up objects have no collider. Receptacles become shells around
    the (possibly opened) cavity.
    """
    if inst.is_picked_up:
        return []
    cls = catalog.get(inst.category)
    local = _local_outer(cls, inst)
    if not cls.receptacle:
        parts = [local]
    else:
        hollow = cls.interior_for_variant(inst.variant_index)
        if cls.openable and inst.is_open:
            # Cavity reaches the front face of the open box.
            hollow = Aabb(hollow.min, Vec3(hollow.max.x, hollow.max.y, local.max.z))
        hollow = Aabb(
            Vec3(max(hollow.min.x, local.min.x), max(hollow.min.y, local.min.y), max(hollow.min.z, local.min.z)),
            Vec3(min(hollow.max.x, local.max.x), min(hollow.max.y, local.max.y), min(hollow.max.z, local.max.z)),
        )
        parts = shell_parts(local, hollow)
    return [rotate_box_yaw(p, inst.rotation_yaw).translated(inst.position) for p in parts]


def interior_world(inst: ObjectInstance, catalog) -> Aabb:
    """World-frame interior volume of a receptacle instance."""
    cls = catalog.get(inst.category)
    assert cls.interior_extents is not None, f"{inst.category} is not a receptacle"
    return rotate_box_yaw(cls.interior_for_variant(inst.variant_index), inst.rotation_yaw).translated(inst.position)


FLOOR_ID = "Floor"
FLOOR_THICKNESS = 0.1


def floor_collider(scene: Scene) -> Collider:
    fb = scene.floor_bounds
    box = Aabb(Vec3(fb.min.x, -FLOOR_THICKNESS, fb.min.z), Vec3(fb.max.x, 0.0, fb.max.z))
    return Collider(FLOOR_ID, box)


def _geometry_ok(inst: ObjectInstance, catalog) -> bool:
    """Class resolvable, variant in range, yaw on the grid: the instance's
    world boxes are computable."""
    if inst.category not in catalog:
        return False
    cls = catalog.get(inst.category)
    return 0 <= inst.variant_index < cls.num_variants and inst.rotation_yaw in _YAWS


def scene_colliders(scene: Scene, catalog) -> list[Collider]:
    """Every enabled collider in deterministic order: floor, walls, objects.

    Instances whose geometry cannot be computed (bad class ref or variant)
    contribute nothing; validation reports them separately.
    """
    out = [floor_collider(scene)]
    for i, wall in enumerate(scene.walls):
        out.append(Collider(f"Wall_{i + 1}", wall))
    for inst in scene.all_instances():
        if not _geometry_ok(inst, catalog):
            continue
        cls = catalog.get(inst.category)
        for part in collider_parts(inst, catalog):
            out.append(Collider(inst.object_id, part, transparent=cls.transparent))
    return out


def _segment_box_distance(p0: Vec3, p1: Vec3, box: Aabb) -> float:
    """Distance from a vertical segment to a box (exact for x==x, z==z ends)."""
    assert p0.x == p1.x and p0.z == p1.z
    dx = max(box.min.x - p0.x, 0.0, p0.x - box.max.x)
    dz = max(box.min.z - p0.z, 0.0, p0.z - box.max.z)
    lo, hi = min(p0.y, p1.y), max(p0.y, p1.y)
    dy = max(box.min.y - hi, 0.0, lo - box.max.y)
    return (dx * dx + dy * dy + dz * dz) ** 0.5


def capsule_box_distance(agent: AgentState, box: Aabb) -> float:
    """Distance from the capsule surface to the box (negative = penetrating)."""
    p0, p1 = agent.axis_segment()
    return _segment_box_distance(p0, p1, box) - agent.capsule_radius


def _containment_forest_ok(instances: list[ObjectInstance]) -> bool:
    parents = {i.object_id: i.parent_receptacle for i in instances}
    for start in parents:
        seen = set()
        node = start
        while node is not None:
            if node in seen:
                return False
            seen.add(node)
            node = parents.get(node)
    return True


def validate_scene(scene: Scene, catalog=None) -> list[Violation]:
    """Check every model invariant; an empty list means the scene is valid."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    v: list[Violation] = []

    if not 1 <= scene.scene_number <= 120:
        v.append(Violation("BadValue", "scene_number", f"{scene.scene_number} not in [1, 120]"))
    if scene.room_category not in ROOM_CATEGORIES:
        v.append(Violation("BadValue", "room_category", scene.room_category))
    if not scene.floor_bounds.is_valid():
        v.append(Violation("BadValue", "floor_bounds", "invalid box"))

    by_id: dict[str, ObjectInstance] = {}
    for list_name, instances in (("objects", scene.objects), ("props", scene.props)):
        for i, inst in enumerate(instances):
            path = f"{list_name}[{i}]"
            if inst.object_id in by_id:
                v.append(Violation("DuplicateId", f"{path}.objectId", inst.object_id))
                continue
            by_id[inst.object_id] = inst
            if inst.category not in catalog:
                v.append(Violation("BadReference", f"{path}.classRef", inst.category))
                continue
            cls = catalog.get(inst.category)
            if not 0 <= inst.variant_index < cls.num_variants:
                v.append(
                    Violation(
                        "VariantOutOfRange",
                        f"{path}.variantIndex",
                        f"{inst.variant_index} not in [0, {cls.num_variants})",
                    )
                )
            if inst.rotation_yaw not in _YAWS:
                v.append(Violation("BadValue", f"{path}.rotationYaw", str(inst.rotation_yaw)))
            if not inst.position.is_finite() or not inst.velocity.is_finite():
                v.append(Violation("BadValue", f"{path}.position", "non-finite"))
            for flag, allowed in (
                ("is_open", cls.openable),
                ("is_toggled", cls.toggleable),
                ("is_sliced", cls.sliceable),
                ("is_picked_up", cls.pickupable),
            ):
                if getattr(inst, flag) and not allowed:
                    v.append(Violation("FlagIllegal", f"{path}.{flag}", f"class {inst.category} lacks affordance"))
            if inst.contained_ids and not cls.receptacle:
                v.append(Violation("FlagIllegal", f"{path}.containedIds", "not a receptacle class"))
            if inst.is_picked_up:
                if inst.parent_receptacle is not None:
                    v.append(Violation("BadValue", f"{path}.parentReceptacle", "picked-up object cannot be contained"))
                if inst.velocity.length() != 0.0:
                    v.append(Violation("BadValue", f"{path}.velocity", "picked-up object must be at rest"))

    for i, inst in enumerate(scene.objects):
        path = f"objects[{i}]"
        if inst.parent_receptacle is not None:
            parent = by_id.get(inst.parent_receptacle)
            if parent is None or parent.category not in catalog or not catalog.get(parent.category).receptacle:
                v.append(Violation("BadReference", f"{path}.parentReceptacle", str(inst.parent_receptacle)))
            elif inst.object_id not in parent.contained_ids:
                v.append(Violation("BadReference", f"{path}.parentReceptacle", "parent does not list this id"))
            elif _geometry_ok(inst, catalog) and _geometry_ok(parent, catalog):
                interior = interior_world(parent, catalog)
                if not interior.contains_box(world_aabb(inst, catalog), 1e-6):
                    v.append(Violation("ContainmentViolation", f"{path}", "outside parent interiorExtents"))
        if _geometry_ok(inst, catalog) and not inst.is_picked_up:
            wb = world_aabb(inst, catalog)
            fb = scene.floor_bounds
            if wb.min.x < fb.min.x - 1e-9 or wb.max.x > fb.max.x + 1e-9 or wb.min.z < fb.min.z - 1e-9 or wb.max.z > fb.max.z + 1e-9:
                v.append(Violation("OutOfBounds", f"{path}", "outside floor bounds"))

    if not _containment_forest_ok(scene.objects):
        v.append(Violation("BadReference", "objects", "containment links form a cycle"))

    colliders = scene_colliders(scene, catalog)
    exempt: set[tuple[str, str]] = set()
    for inst in scene.objects:
        if inst.parent_receptacle is not None:
            pair = tuple(sorted((inst.object_id, inst.parent_receptacle)))
            exempt.add(pair)  # contents may touch their receptacle shell
    for i in range(len(colliders)):
        for j in range(i + 1, len(colliders)):
            a, b = colliders[i], colliders[j]
            if a.owner == b.owner:
                continue
            if tuple(sorted((a.owner, b.owner))) in exempt:
                continue
            depth = overlap_depth(a.box, b.box)
            if depth > SKIN:
                v.append(
                    Violation(
                        "Interpenetration",
                        f"colliders[{a.owner},{b.owner}]",
                        f"overlap {depth:.4f} m",
                    )
                )

    agent = scene.agent
    if agent.rotation_yaw not in _YAWS:
        v.append(Violation("BadValue", "agent.rotationYaw", str(agent.rotation_yaw)))
    if agent.camera_horizon not in _HORIZONS:
        v.append(Violation("BadValue", "agent.cameraHorizon", str(agent.camera_horizon)))
    if agent.held_object_id is not None:
        held = by_id.get(agent.held_object_id)
        if held is None or not held.is_picked_up:
            v.append(Violation("BadReference", "agent.heldObjectId", str(agent.held_object_id)))
    for held_candidate in scene.objects:
        if held_candidate.is_picked_up and agent.held_object_id != held_candidate.object_id:
            v.append(Violation("BadReference", f"objects[{held_candidate.object_id}]", "picked up but not held"))
    for c in colliders:
        if capsule_box_distance(agent, c.box) < -SKIN:
            v.append(Violation("AgentOverlap", f"agent vs {c.owner}", "capsule penetrates collider"))

    return v
