"""Geometric queries: ray/sphere casts, capsule sweeps, frustum and fit
tests, and a BVH that returns bit-identical results to brute force.

Cast semantics are canonical and order-independent: among all collider
hits within 1e-9 m of the earliest hit distance, the lexicographically
smallest owner id wins. Brute force and BVH both implement exactly this
rule, so their results agree on every query.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .camera import NEAR_PLANE, Camera
from .geometry import Aabb, Vec3, boxes_overlap
from .scene import FLOOR_ID, SKIN, AgentState, Collider, Scene, interior_world, scene_colliders, world_aabb

T_TIE = 1e-9
FIT_GRID = 0.05


@dataclass(frozen=True, slots=True)
class Ray:
    origin: Vec3
    direction: Vec3
    max_length: float
    radius: float = 0.0

    def point_at(self, t: float) -> Vec3:
        return self.origin + self.direction.scaled(t)


@dataclass(frozen=True, slots=True)
class CastHit:
    object_id: str
    t: float
    point: Vec3


def _slab_interval(origin: Vec3, direction: Vec3, box: Aabb) -> tuple[float, float] | None:
    """(t_enter, t_exit) of the unclamped line against the box, or None."""
    t0, t1 = -math.inf, math.inf
    for o, d, lo, hi in (
        (origin.x, direction.x, box.min.x, box.max.x),
        (origin.y, direction.y, box.min.y, box.max.y),
        (origin.z, direction.z, box.min.z, box.max.z),
    ):
        if d == 0.0:
            if o < lo or o > hi:
                return None
            continue
        a = (lo - o) / d
        b = (hi - o) / d
        if a > b:
            a, b = b, a
        if a > t0:
            t0 = a
        if b < t1:
            t1 = b
        if t0 > t1:
            return None
    return t0, t1


def ray_box_t(ray: Ray, box: Aabb) -> float | None:
    """Hit distance of a thin ray (slab method); origin-inside yields 0."""
    iv = _slab_interval(ray.origin, ray.direction, box)
    if iv is None:
        return None
    t0, t1 = iv
    if t1 < 0.0 or t0 > ray.max_length:
        return None
    return max(t0, 0.0)


def sphere_cast_box_t(ray: Ray, box: Aabb) -> float | None:
    """Earliest t where a sphere of ray.radius swept along the ray touches
    the box.

    Face contacts come straight from the slab test on the dilated box. Edge
    and corner grazes fall back to convex minimization of the point-box
    distance along the ray (the distance to a convex set along a line is
    convex), refined by fixed-count bisection so results are deterministic.
    """
    r = ray.radius
    if r == 0.0:
        return ray_box_t(ray, box)
    if box.distance_to_point(ray.origin) <= r:
        return 0.0
    iv = _slab_interval(ray.origin, ray.direction, box.expanded(r))
    if iv is None:
        return None
    t0, t1 = iv
    if t1 < 0.0 or t0 > ray.max_length:
        return None
    a, b = max(t0, 0.0), min(t1, ray.max_length)
    if a > b:
        return None

    def dist(t: float) -> float:
        return box.distance_to_point(ray.point_at(t))

    if dist(a) <= r + 1e-12:
        return a
    lo, hi = a, b
    for _ in range(64):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if dist(m1) <= dist(m2):
            hi = m2
        else:
            lo = m1
    t_min = (lo + hi) / 2.0
    if dist(t_min) > r:
        return None
    lo, hi = a, t_min
    for _ in range(64):
        mid = (lo + hi) / 2.0
        if dist(mid) > r:
            lo = mid
        else:
            hi = mid
    return hi


class _BestHit:
    """Canonical nearest-hit accumulator with the 1e-9 owner tie window."""

    __slots__ = ("hits", "min_t")

    def __init__(self):
        self.hits: list[tuple[float, str]] = []
        self.min_t = math.inf

    def offer(self, t: float, owner: str) -> None:
        if t < self.min_t:
            self.min_t = t
            self.hits = [h for h in self.hits if h[0] <= self.min_t + T_TIE]
        if t <= self.min_t + T_TIE:
            self.hits.append((t, owner))

    def bound(self) -> float:
        return self.min_t + T_TIE

    def resolve(self) -> tuple[float, str] | None:
        window = [h for h in self.hits if h[0] <= self.min_t + T_TIE]
        if not window:
            return None
        owner = min(h[1] for h in window)
        t = min(h[0] for h in window if h[1] == owner)
        return t, owner


def _collider_passes(c: Collider, ignore: set[str], pass_transparent: bool, transparent_exempt: str | None) -> bool:
    if c.owner in ignore:
        return False
    if pass_transparent and c.transparent and c.owner != transparent_exempt:
        return False
    return True


def cast_colliders(
    ray: Ray,
    colliders: list[Collider],
    ignore: set[str] | None = None,
    pass_transparent: bool = False,
    transparent_exempt: str | None = None,
) -> CastHit | None:
    """Brute-force nearest hit over a collider list.

    ``transparent_exempt`` keeps one owner's colliders hittable even when
    transparent colliders are skipped: the visibility ray aimed at a glass
    object must still be able to strike it.
    """
    ignore = ignore or set()
    best = _BestHit()
    for c in colliders:
        if not _collider_passes(c, ignore, pass_transparent, transparent_exempt):
            continue
        t = sphere_cast_box_t(ray, c.box)
        if t is not None and t <= ray.max_length:
            best.offer(t, c.owner)
    resolved = best.resolve()
    if resolved is None:
        return None
    t, owner = resolved
    return CastHit(object_id=owner, t=t, point=ray.point_at(t))


def cast(
    ray: Ray,
    scene: Scene,
    catalog=None,
    ignore: set[str] | None = None,
    pass_transparent: bool = False,
) -> CastHit | None:
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    return cast_colliders(ray, scene_colliders(scene, catalog), ignore, pass_transparent)


@dataclass
class _BvhNode:
    box: Aabb
    left: "_BvhNode | None" = None
    right: "_BvhNode | None" = None
    items: list[int] = field(default_factory=list)


_LEAF_SIZE = 4


class Bvh:
    """Median-split BVH over the enabled colliders of a scene snapshot."""

    def __init__(self, colliders: list[Collider]):
        self.colliders = list(colliders)
        if self.colliders:
            self.root = self._build(list(range(len(self.colliders))))
        else:
            self.root = None

    def _build(self, idxs: list[int]) -> _BvhNode:
        box = self.colliders[idxs[0]].box
        for i in idxs[1:]:
            box = box.union(self.colliders[i].box)
        node = _BvhNode(box=box)
        if len(idxs) <= _LEAF_SIZE:
            node.items = idxs
            return node
        size = box.size()
        axis = "x" if size.x >= size.y and size.x >= size.z else ("y" if size.y >= size.z else "z")
        idxs.sort(key=lambda i: getattr(self.colliders[i].box.center(), axis))
        mid = len(idxs) // 2
        node.left = self._build(idxs[:mid])
        node.right = self._build(idxs[mid:])
        return node

    def cast(
        self,
        ray: Ray,
        ignore: set[str] | None = None,
        pass_transparent: bool = False,
        transparent_exempt: str | None = None,
    ) -> CastHit | None:
        ignore = ignore or set()
        best = _BestHit()
        if self.root is not None:
            self._cast_node(self.root, ray, ignore, pass_transparent, transparent_exempt, best)
        resolved = best.resolve()
        if resolved is None:
            return None
        t, owner = resolved
        return CastHit(object_id=owner, t=t, point=ray.point_at(t))

    def _cast_node(self, node: _BvhNode, ray: Ray, ignore, pass_transparent, transparent_exempt, best: _BestHit) -> None:
        iv = _slab_interval(ray.origin, ray.direction, node.box.expanded(ray.radius))
        if iv is None:
            return
        t0, t1 = iv
        if t1 < 0.0 or t0 > ray.max_length or t0 > best.bound():
            return
        if node.items:
            for i in node.items:
                c = self.colliders[i]
                if not _collider_passes(c, ignore, pass_transparent, transparent_exempt):
                    continue
                t = sphere_cast_box_t(ray, c.box)
                if t is not None and t <= ray.max_length:
                    best.offer(t, c.owner)
            return
        assert node.left is not None and node.right is not None
        self._cast_node(node.left, ray, ignore, pass_transparent, transparent_exempt, best)
        self._cast_node(node.right, ray, ignore, pass_transparent, transparent_exempt, best)

    def query_aabb(self, box: Aabb) -> list[Collider]:
        """Colliders whose boxes overlap or touch the query box."""
        out: list[Collider] = []
        if self.root is None:
            return out
        stack = [self.root]
        probe = box.expanded(1e-9)
        while stack:
            node = stack.pop()
            if not boxes_overlap(node.box.expanded(1e-9), probe):
                continue
            if node.items:
                for i in node.items:
                    if boxes_overlap(self.colliders[i].box.expanded(1e-9), probe):
                        out.append(self.colliders[i])
            else:
                stack.append(node.left)
                stack.append(node.right)
        return out


def build_bvh(scene: Scene, catalog=None) -> Bvh:
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    return Bvh(scene_colliders(scene, catalog))


# ---------------------------------------------------------------------------
# Capsule sweeps


def _interval_gap(lo_a: float, hi_a: float, lo_b: float, hi_b: float) -> float:
    return max(lo_b - hi_a, 0.0, lo_a - hi_b)


def _circle_cast_rect(
    px: float,
    pz: float,
    ux: float,
    uz: float,
    rect_min_x: float,
    rect_max_x: float,
    rect_min_z: float,
    rect_max_z: float,
    radius: float,
) -> float | None:
    """Earliest t >= 0 where a circle moving along (ux, uz) touches a rect.

    The swept region (rect dilated by the circle) is the union of the rect
    expanded along x, the rect expanded along z, and four corner discs;
    entry into a union of convex sets is the min of the entries, all in
    closed form.
    """
    dx = max(rect_min_x - px, 0.0, px - rect_max_x)
    dz = max(rect_min_z - pz, 0.0, pz - rect_max_z)
    if dx * dx + dz * dz <= radius * radius:
        return 0.0

    candidates: list[float] = []

    def rect_entry(min_x, max_x, min_z, max_z):
        t0, t1 = -math.inf, math.inf
        for o, d, lo, hi in ((px, ux, min_x, max_x), (pz, uz, min_z, max_z)):
            if d == 0.0:
                if o < lo or o > hi:
                    return
                continue
            a, b = (lo - o) / d, (hi - o) / d
            if a > b:
                a, b = b, a
            t0, t1 = max(t0, a), min(t1, b)
        if t0 <= t1 and t1 >= 0.0:
            candidates.append(max(t0, 0.0))

    rect_entry(rect_min_x - radius, rect_max_x + radius, rect_min_z, rect_max_z)
    rect_entry(rect_min_x, rect_max_x, rect_min_z - radius, rect_max_z + radius)
    for cx, cz in (
        (rect_min_x, rect_min_z),
        (rect_min_x, rect_max_z),
        (rect_max_x, rect_min_z),
        (rect_max_x, rect_max_z),
    ):
        ox, oz = px - cx, pz - cz
        b = ox * ux + oz * uz
        c = ox * ox + oz * oz - radius * radius
        disc = b * b - c
        if disc < 0.0:
            continue
        root = -b - math.sqrt(disc)
        if root >= 0.0:
            candidates.append(root)
    if not candidates:
        return None
    return min(candidates)


def capsule_free_distance(
    agent: AgentState,
    displacement: Vec3,
    colliders: list[Collider],
    ignore: set[str] | None = None,
) -> float:
    """Largest d in [0, |displacement|] the capsule can translate without
    coming closer than the skin tolerance to any collider.

    Displacement must be horizontal; vertical agent motion does not exist.
    The floor is the support surface, never an obstacle.
    """
    ignore = set(ignore or ())
    ignore.add(FLOOR_ID)
    length = displacement.length()
    if length == 0.0:
        return 0.0
    if abs(displacement.y) > 1e-12:
        raise ValueError("capsule sweep must be horizontal")
    ux, uz = displacement.x / length, displacement.z / length
    p0, p1 = agent.axis_segment()
    reach = agent.capsule_radius + SKIN
    free = length
    for c in colliders:
        if c.owner in ignore:
            continue
        box = c.box
        dy = _interval_gap(p0.y, p1.y, box.min.y, box.max.y)
        if dy >= reach:
            continue
        r2d = math.sqrt(reach * reach - dy * dy)
        t = _circle_cast_rect(p0.x, p0.z, ux, uz, box.min.x, box.max.x, box.min.z, box.max.z, r2d)
        if t is not None and t < free:
            free = t
    return max(free, 0.0)


def sweep_capsule(agent: AgentState, displacement: Vec3, scene: Scene, catalog=None) -> float:
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    return capsule_free_distance(agent, displacement, scene_colliders(scene, catalog))


def capsule_pose_free(agent: AgentState, colliders: list[Collider], ignore: set[str] | None = None) -> bool:
    """True when the capsule keeps at least the skin clearance from every
    collider except the floor it stands on."""
    ignore = set(ignore or ())
    ignore.add(FLOOR_ID)
    p0, p1 = agent.axis_segment()
    reach = agent.capsule_radius + SKIN
    for c in colliders:
        if c.owner in ignore:
            continue
        box = c.box
        dx = max(box.min.x - p0.x, 0.0, p0.x - box.max.x)
        dz = max(box.min.z - p0.z, 0.0, p0.z - box.max.z)
        dy = _interval_gap(p0.y, p1.y, box.min.y, box.max.y)
        if dx * dx + dy * dy + dz * dz < reach * reach - 1e-12:
            return False
    return True


# ---------------------------------------------------------------------------
# Frustum test


def frustum_contains(camera: Camera, box: Aabb, far: float) -> bool:
    """Conservative frustum-AABB intersection via the six-plane test.

    Touching a plane counts as intersecting. Corner-region false positives
    are possible (standard for plane tests) and acceptable: the visibility
    predicate still requires a successful ray hit afterwards.
    """
    forward, right, up = camera.basis()
    eye = camera.position
    th, tv = camera.tan_half_hfov, camera.tan_half_vfov
    planes = [
        (forward, -NEAR_PLANE),  # forward . (p - eye) >= near
        (forward.scaled(-1.0), far),  # forward . (p - eye) <= far
        (forward.scaled(th) - right, 0.0),
        (forward.scaled(th) + right, 0.0),
        (forward.scaled(tv) - up, 0.0),
        (forward.scaled(tv) + up, 0.0),
    ]
    for normal, offset in planes:
        # most-positive vertex along the plane normal
        px = box.max.x if normal.x > 0 else box.min.x
        py = box.max.y if normal.y > 0 else box.min.y
        pz = box.max.z if normal.z > 0 else box.min.z
        if normal.dot(Vec3(px, py, pz) - eye) + offset < 0.0:
            return False
    return True


# ---------------------------------------------------------------------------
# Receptacle fit


def fit_in_receptacle(
    obj_box: Aabb,
    receptacle,
    scene: Scene,
    catalog=None,
    exclude_ids: set[str] | None = None,
) -> Vec3 | None:
    """First grid point where the box fits inside the receptacle interior.

    Scans the interior floor on a 0.05 m grid, back-left (min z, min x) to
    front-right, z-major. Returns the world min-corner for the box at the
    first free cell, or None when nothing fits. ``exclude_ids`` names
    colliders ignored during the occupancy check (the moving object and
    the receptacle shell itself).
    """
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    exclude = set(exclude_ids or ())
    exclude.add(receptacle.object_id)
    interior = interior_world(receptacle, catalog)
    size = obj_box.size()
    span_x = interior.max.x - interior.min.x - size.x
    span_z = interior.max.z - interior.min.z - size.z
    if span_x < -1e-9 or span_z < -1e-9 or size.y > interior.max.y - interior.min.y + 1e-9:
        return None
    obstacles = [
        c
        for c in scene_colliders(scene, catalog)
        if c.owner not in exclude and boxes_overlap(c.box, interior.expanded(0.001))
    ]
    steps_x = int(span_x / FIT_GRID + 1e-9)
    steps_z = int(span_z / FIT_GRID + 1e-9)
    for kz in range(steps_z + 1):
        z0 = interior.min.z + kz * FIT_GRID
        for kx in range(steps_x + 1):
            x0 = interior.min.x + kx * FIT_GRID
            candidate = Aabb(
                Vec3(x0, interior.min.y, z0),
                Vec3(x0 + size.x, interior.min.y + size.y, z0 + size.z),
            )
            if not interior.contains_box(candidate, 1e-9):
                continue
            if all(not boxes_overlap(candidate.expanded(-1e-9), c.box) for c in obstacles):
                return candidate.min
    return None


def placement_to_position(inst, catalog, target_min: Vec3) -> Vec3:
    """Instance position that puts its rotated collider box min at target."""
    current = world_aabb(inst, catalog)
    offset = inst.position - current.min
    return target_min + offset
