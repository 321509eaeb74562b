"""Deterministic procedural generation of the 120-scene corpus.

Scene numbers map to room categories in fixed blocks of 30 (kitchen,
living room, bedroom, bathroom). Everything downstream of the scene
number comes from a counter-based RNG keyed only by it, so generation is
byte-identical across runs and hosts. Furniture walks the walls with
first-fit collision checks, small objects land in receptacles via the
same grid scan the PutObject action uses, and the agent spawns at the
free grid cell nearest room center.
"""

from __future__ import annotations

from .errors import OutOfRangeError, PlacementFailure, UnknownCategoryError
from .geometry import Aabb, Vec3, boxes_overlap, rotate_box_yaw
from .rng import CounterRng
from .scene import AgentState, ObjectInstance, Scene, scene_colliders, validate_scene, world_aabb
from .spatial import capsule_pose_free, fit_in_receptacle, placement_to_position

SCENES_PER_CATEGORY = 30
CATEGORY_ORDER = ("kitchen", "livingroom", "bedroom", "bathroom")

# (min_w, max_w, min_d, max_d) in meters; snapped to the 0.25 m grid
ROOM_RANGES = {
    "kitchen": (4.5, 6.0, 4.0, 5.5),
    "livingroom": (5.0, 6.5, 4.5, 6.0),
    "bedroom": (4.25, 5.5, 4.0, 5.0),
    "bathroom": (3.5, 4.25, 3.25, 4.0),
}

WALL_HEIGHT = 2.5
WALL_THICKNESS = 0.1
_EDGE_MARGIN = 0.3
_ITEM_GAP = 0.15
_CLEARANCE = 0.05

# Floor-standing furniture placed against walls, in order. The required
# set guarantees every scene has receptacles, something openable, and
# something toggleable.
FURNITURE_REQUIRED = {
    "kitchen": ["CounterTop", "Fridge", "Oven", "Sink", "Cabinet", "GarbageCan"],
    "livingroom": ["Sofa", "TVStand", "CoffeeTable", "SideTable", "Box", "FloorLamp"],
    "bedroom": ["Bed", "Dresser", "Desk", "LaundryHamper", "FloorLamp"],
    "bathroom": ["Bathtub", "Sink", "Toilet", "Cabinet", "GarbageCan", "ShowerDoor"],
}
FURNITURE_OPTIONAL = {
    "kitchen": ["Dishwasher", "Chair", "Stool", "DiningTable", "Drawer"],
    "livingroom": ["ArmChair", "HousePlant", "Statue", "Chair", "Television"],
    "bedroom": ["SideTable", "Chair", "HousePlant", "Stool"],
    "bathroom": ["LaundryHamper", "Stool"],
}

# (category, mount height) fixed to walls
WALL_MOUNTED = {
    "kitchen": [("Shelf", 1.3)],
    "livingroom": [("Shelf", 1.4)],
    "bedroom": [("Shelf", 1.4)],
    "bathroom": [("ShowerHead", 1.85), ("TowelHolder", 1.2), ("ToiletPaperHanger", 0.8)],
}

# Appliances and fixtures that sit on a specific receptacle category
SURFACE_ITEMS = {
    "kitchen": [
        ("Microwave", "CounterTop"),
        ("Toaster", "CounterTop"),
        ("CoffeeMachine", "CounterTop"),
        ("StoveBurner", "CounterTop"),
        ("Faucet", "CounterTop"),
    ],
    "livingroom": [("TableLamp", "SideTable")],
    "bedroom": [("DeskLamp", "Desk"), ("AlarmClock", "Desk")],
    "bathroom": [("Faucet", "Sink")],
}

PICKUP_ITEMS = {
    "kitchen": ["Bread", "Mug", "Apple", "Plate", "Knife", "Potato", "Cup", "Egg", "SaltShaker", "Tomato"],
    "livingroom": ["RemoteControl", "Book", "Laptop", "Newspaper", "Vase", "CellPhone", "KeyChain", "Pillow"],
    "bedroom": ["Book", "CD", "TeddyBear", "Pillow", "CellPhone", "BasketBall"],
    "bathroom": ["Towel", "SoapBar", "ToiletPaper", "Sponge", "SprayBottle", "ScrubBrush", "HandTowel"],
}
_REQUIRED_PICKUPS = 4


def room_category_for(scene_number: int) -> str:
    if not 1 <= scene_number <= 120:
        raise OutOfRangeError(f"scene number {scene_number} not in [1, 120]")
    return CATEGORY_ORDER[(scene_number - 1) // SCENES_PER_CATEGORY]


def select_variant(category: str, scene_number: int, catalog=None) -> int:
    """Per-scene variant choice: scene number modulo the class's variants."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if category not in catalog:
        raise UnknownCategoryError(category)
    return scene_number % catalog.get(category).num_variants


def _snap(lo: float, hi: float, rng: CounterRng) -> float:
    steps = int(round((hi - lo) / 0.25))
    return lo + 0.25 * rng.randint(0, steps)


class _Builder:
    """Accumulates one scene; all randomness comes from the injected rng."""

    def __init__(self, scene_number: int, catalog, rng: CounterRng):
        self.n = scene_number
        self.catalog = catalog
        self.rng = rng
        self.category = room_category_for(scene_number)
        lo_w, hi_w, lo_d, hi_d = ROOM_RANGES[self.category]
        self.width = _snap(lo_w, hi_w, rng)
        self.depth = _snap(lo_d, hi_d, rng)
        floor = Aabb(Vec3(0.0, -0.1, 0.0), Vec3(self.width, 0.0, self.depth))
        walls = [
            Aabb(Vec3(-WALL_THICKNESS, 0.0, -WALL_THICKNESS), Vec3(self.width + WALL_THICKNESS, WALL_HEIGHT, 0.0)),
            Aabb(Vec3(self.width, 0.0, 0.0), Vec3(self.width + WALL_THICKNESS, WALL_HEIGHT, self.depth)),
            Aabb(Vec3(-WALL_THICKNESS, 0.0, self.depth), Vec3(self.width + WALL_THICKNESS, WALL_HEIGHT, self.depth + WALL_THICKNESS)),
            Aabb(Vec3(-WALL_THICKNESS, 0.0, 0.0), Vec3(0.0, WALL_HEIGHT, self.depth)),
        ]
        self.scene = Scene(
            scene_number=scene_number,
            room_category=self.category,
            floor_bounds=floor,
            walls=walls,
            objects=[],
            props=[],
            agent=AgentState(position=Vec3(self.width / 2, 0.0, self.depth / 2)),
            seed=scene_number,
        )
        self.placed_boxes: list[Aabb] = []
        self.id_counters: dict[str, int] = {}
        # wall index -> cursor along the wall; separate track for mounts
        self.cursors = [_EDGE_MARGIN] * 4
        self.mount_cursors = [0.4] * 4

    def next_id(self, category: str) -> str:
        k = self.id_counters.get(category, 0) + 1
        self.id_counters[category] = k
        return f"{category}_{k}"

    def new_instance(self, category: str) -> ObjectInstance:
        return ObjectInstance(
            object_id=self.next_id(category),
            category=category,
            variant_index=select_variant(category, self.n, self.catalog),
        )

    # wall i: 0 south (z=0, faces +z), 1 east (x=W, faces -x),
    # 2 north (z=D, faces -z), 3 west (x=0, faces +x)
    _WALL_YAW = (0, 270, 180, 90)

    def _wall_length(self, wall: int) -> float:
        return self.width if wall in (0, 2) else self.depth

    def _pose_on_wall(self, wall: int, cursor: float, rb: Aabb, mount_y: float) -> Vec3:
        if wall == 0:
            return Vec3(cursor - rb.min.x, mount_y, -rb.min.z)
        if wall == 1:
            return Vec3(self.width - rb.max.x, mount_y, cursor - rb.min.z)
        if wall == 2:
            return Vec3(cursor - rb.min.x, mount_y, self.depth - rb.max.z)
        return Vec3(-rb.min.x, mount_y, cursor - rb.min.z)

    def _conflicts(self, box: Aabb) -> bool:
        probe = box.expanded(_CLEARANCE)
        return any(boxes_overlap(probe, placed) for placed in self.placed_boxes)

    def place_against_wall(self, category: str, mount_y: float = 0.0, mounted: bool = False) -> ObjectInstance | None:
        """First-fit walk over the four walls; None when nothing fits."""
        cls = self.catalog.get(category)
        variant = select_variant(category, self.n, self.catalog)
        cursors = self.mount_cursors if mounted else self.cursors
        start_wall = self.rng.randint(0, 3)
        for attempt in range(4):
            wall = (start_wall + attempt) % 4
            yaw = self._WALL_YAW[wall]
            rb = rotate_box_yaw(cls.closed_for_variant(variant), yaw)
            along = rb.size().x if wall in (0, 2) else rb.size().z
            length = self._wall_length(wall)
            cursor = cursors[wall]
            while cursor + along <= length - _EDGE_MARGIN + 1e-9:
                pos = self._pose_on_wall(wall, cursor, rb, mount_y)
                box = rb.translated(pos)
                if not self._conflicts(box):
                    inst = self.new_instance(category)
                    inst.position = pos
                    inst.rotation_yaw = yaw
                    self.scene.objects.append(inst)
                    self.placed_boxes.append(box)
                    cursors[wall] = cursor + along + _ITEM_GAP
                    return inst
                cursor += 0.1
            cursors[wall] = cursor
        return None

    def place_into(self, category: str, receptacle: ObjectInstance) -> ObjectInstance | None:
        cls = self.catalog.get(category)
        variant = select_variant(category, self.n, self.catalog)
        inst = ObjectInstance(
            object_id=self.next_id(category),
            category=category,
            variant_index=variant,
            rotation_yaw=receptacle.rotation_yaw,
        )
        probe_box = rotate_box_yaw(cls.closed_for_variant(variant), inst.rotation_yaw)
        inst.position = Vec3(0.0, 0.0, 0.0)
        target = fit_in_receptacle(
            probe_box, receptacle, self.scene, self.catalog, exclude_ids={inst.object_id}
        )
        if target is None:
            self.id_counters[category] -= 1  # id not consumed
            return None
        inst.position = target - probe_box.min
        inst.parent_receptacle = receptacle.object_id
        receptacle.contained_ids.append(inst.object_id)
        receptacle.contained_ids.sort()
        self.scene.objects.append(inst)
        return inst

    def receptacle_instances(self) -> list[ObjectInstance]:
        return [
            inst
            for inst in self.scene.objects
            if self.catalog.get(inst.category).receptacle
        ]

    def place_prop_on_wall(self, category: str, mount_y: float) -> None:
        cls = self.catalog.get(category)
        variant = select_variant(category, self.n, self.catalog)
        wall = self.rng.randint(0, 3)
        yaw = self._WALL_YAW[wall]
        rb = rotate_box_yaw(cls.closed_for_variant(variant), yaw)
        along = rb.size().x if wall in (0, 2) else rb.size().z
        length = self._wall_length(wall)
        cursor = 0.5 + 0.25 * self.rng.randint(0, max(0, int((length - 1.5) / 0.25)))
        while cursor + along <= length - _EDGE_MARGIN:
            pos = self._pose_on_wall(wall, cursor, rb, mount_y)
            box = rb.translated(pos)
            if not self._conflicts(box):
                inst = ObjectInstance(
                    object_id=self.next_id(category),
                    category=category,
                    variant_index=variant,
                    position=pos,
                    rotation_yaw=yaw,
                )
                self.scene.props.append(inst)
                self.placed_boxes.append(box)
                return
            cursor += 0.25

    def spawn_agent(self) -> None:
        colliders = scene_colliders(self.scene, self.catalog)
        agent = self.scene.agent
        cx, cz = self.width / 2, self.depth / 2
        candidates = []
        x = 0.5
        while x <= self.width - 0.5 + 1e-9:
            z = 0.5
            while z <= self.depth - 0.5 + 1e-9:
                candidates.append((round((x - cx) ** 2 + (z - cz) ** 2, 9), x, z))
                z += 0.25
            x += 0.25
        candidates.sort()
        yaw = self.rng.choice((0, 90, 180, 270))
        for _, x, z in candidates:
            probe = AgentState(position=Vec3(x, 0.0, z), rotation_yaw=yaw)
            if capsule_pose_free(probe, colliders):
                agent.position = Vec3(x, 0.0, z)
                agent.rotation_yaw = yaw
                return
        raise RuntimeError(f"scene {self.n}: no free agent spawn")

    def build(self) -> Scene:
        cat = self.category
        for category in FURNITURE_REQUIRED[cat]:
            if self.place_against_wall(category) is None:
                raise RuntimeError(f"scene {self.n}: required {category} does not fit")
        pool = list(FURNITURE_OPTIONAL[cat])
        extra = self.rng.randint(1, min(3, len(pool)))
        for _ in range(extra):
            pick = pool.pop(self.rng.randint(0, len(pool) - 1))
            self.place_against_wall(pick)
        for category, mount_y in WALL_MOUNTED[cat]:
            self.place_against_wall(category, mount_y=mount_y, mounted=True)
        by_category: dict[str, list[ObjectInstance]] = {}
        for inst in self.scene.objects:
            by_category.setdefault(inst.category, []).append(inst)
        for item, target_cat in SURFACE_ITEMS[cat]:
            for receptacle in by_category.get(target_cat, []):
                if self.place_into(item, receptacle) is not None:
                    break
        receptacles = self.receptacle_instances()
        picks = list(PICKUP_ITEMS[cat][:_REQUIRED_PICKUPS])
        rest = list(PICKUP_ITEMS[cat][_REQUIRED_PICKUPS:])
        for _ in range(self.rng.randint(1, 2)):
            if rest:
                picks.append(rest.pop(self.rng.randint(0, len(rest) - 1)))
        for i, item in enumerate(picks):
            order = receptacles[i % len(receptacles):] + receptacles[: i % len(receptacles)]
            for receptacle in order:
                if self.place_into(item, receptacle) is not None:
                    break
        for _ in range(self.rng.randint(1, 2)):
            self.place_prop_on_wall("Poster", 1.4)
        if self.rng.randint(0, 1):
            self.place_prop_on_wall("StickyNote", 1.5)
        self.spawn_agent()
        return self.scene


def generate_scene(scene_number: int, catalog=None) -> Scene:
    """Build the canonical scene for a number in [1, 120]; deterministic."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    if not 1 <= scene_number <= 120:
        raise OutOfRangeError(f"scene number {scene_number} not in [1, 120]")
    rng = CounterRng("scene", scene_number)
    scene = _Builder(scene_number, catalog, rng).build()
    violations = validate_scene(scene, catalog)
    if violations:
        raise RuntimeError(f"scene {scene_number} generated invalid: {violations[:3]}")
    return scene


def randomize_objects(scene: Scene, seed: int, catalog=None) -> Scene:
    """Reassign pickupable objects to receptacles with a seeded shuffle and
    the deterministic first-fit grid scan. Statics and the agent never move;
    the same (scene, seed) always yields the same result."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    work = scene.copy()
    pickables = [
        inst
        for inst in work.objects
        if catalog.get(inst.category).pickupable and not inst.is_picked_up
    ]
    if not pickables:
        return work
    receptacles = sorted(
        (
            inst
            for inst in work.objects
            if catalog.get(inst.category).receptacle and not inst.is_picked_up
        ),
        key=lambda r: r.object_id,
    )
    rng = CounterRng("randomize", seed)
    rng.shuffle(pickables)
    by_id = {o.object_id: o for o in work.objects}
    for inst in pickables:
        if inst.parent_receptacle is not None:
            parent = by_id[inst.parent_receptacle]
            if inst.object_id in parent.contained_ids:
                parent.contained_ids.remove(inst.object_id)
            inst.parent_receptacle = None
    failures = []
    for i, inst in enumerate(pickables):
        start = rng.randint(0, len(receptacles) - 1) if receptacles else 0
        placed = False
        for j in range(len(receptacles)):
            receptacle = receptacles[(start + j) % len(receptacles)]
            if receptacle.object_id == inst.object_id:
                continue
            box = world_aabb(inst, catalog)
            target = fit_in_receptacle(
                box, receptacle, work, catalog, exclude_ids={inst.object_id}
            )
            if target is None:
                continue
            inst.position = placement_to_position(inst, catalog, target)
            inst.velocity = Vec3(0.0, 0.0, 0.0)
            inst.parent_receptacle = receptacle.object_id
            receptacle.contained_ids.append(inst.object_id)
            receptacle.contained_ids.sort()
            placed = True
            break
        if not placed:
            failures.append(inst.object_id)
    if failures:
        raise PlacementFailure(scene, failures)
    return work
