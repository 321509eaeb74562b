"""Object class catalog: the affordance table for every object category.

Each interactable category carries capability flags (pickupable, openable,
toggleable, sliceable, receptacle, transparent), physical constants, and
local-frame collision extents. A handful of non-interactable clutter
classes exist purely to dress scenes; they never appear in step metadata.

Local frame convention: boxes sit with their bottom face on y = 0 and are
centered in x/z. For openable classes the +z face is the side that opens.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import UnknownCategoryError, ValidationError, Violation
from .geometry import Aabb, Vec3
from .rng import CounterRng

STATIC = "static"
MOVABLE = "movable"

# Interior airspace added above the solid body of surface-style receptacles.
SURFACE_CLEARANCE = 0.6
# Wall thickness of container- and enclosed-style receptacles.
WALL = 0.05


@dataclass(frozen=True, slots=True)
class VariantParams:
    color: tuple[float, float, float]
    scale: float


@dataclass(frozen=True, slots=True)
class ObjectClass:
    category: str
    interactable: bool
    pickupable: bool
    openable: bool
    toggleable: bool
    sliceable: bool
    receptacle: bool
    transparent: bool
    movable_static: str
    num_variants: int
    variant_params: tuple[VariantParams, ...]
    mass: float
    friction_coeff: float
    restitution: float
    closed_extents: Aabb
    open_extents: Aabb | None = None
    interior_extents: Aabb | None = None
    slice_count: int | None = None

    @property
    def movable(self) -> bool:
        return self.movable_static == MOVABLE

    def scaled(self, box: Aabb, variant_index: int) -> Aabb:
        s = self.variant_params[variant_index].scale
        return Aabb(box.min.scaled(s), box.max.scaled(s))

    def closed_for_variant(self, variant_index: int) -> Aabb:
        return self.scaled(self.closed_extents, variant_index)

    def open_for_variant(self, variant_index: int) -> Aabb:
        assert self.open_extents is not None
        return self.scaled(self.open_extents, variant_index)

    def interior_for_variant(self, variant_index: int) -> Aabb:
        assert self.interior_extents is not None
        return self.scaled(self.interior_extents, variant_index)


def _box(w: float, h: float, d: float, y0: float = 0.0) -> Aabb:
    return Aabb(Vec3(-w / 2, y0, -d / 2), Vec3(w / 2, y0 + h, d / 2))


def _variants(category: str, n: int) -> tuple[VariantParams, ...]:
    rng = CounterRng("variant-palette", category)
    out = []
    for _ in range(n):
        color = (
            round(0.15 + 0.75 * rng.uniform(), 4),
            round(0.15 + 0.75 * rng.uniform(), 4),
            round(0.15 + 0.75 * rng.uniform(), 4),
        )
        scale = round(0.85 + 0.3 * rng.uniform(), 4)
        out.append(VariantParams(color=color, scale=scale))
    return tuple(out)


# Affordance flag letters: P pickupable, O openable, T toggleable,
# S sliceable, R receptacle, G transparent (glass), M movable-but-not-
# pickupable. Pickupable implies movable.
#
# Receptacle style: "surface" = things rest on top of the solid body
# (interior is the open airspace above it, inside the class box);
# "container" = open-top basin with rim walls; "enclosed" = sealed box
# reachable only when open.
#
# rows: (category, flags, w, h, d, mass, friction, n_variants, style, slices)
_ROWS: list[tuple] = [
    # -- kitchen: food and hand-held items -------------------------------
    # sliceable sources lie long side along local x; their slice classes
    # are thin along x so a row of slices fits in the source footprint
    ("Bread",           "PS", 0.28, 0.14, 0.14, 0.70, 0.50, 30, None, 4),
    ("BreadSliced",     "P",  0.03, 0.10, 0.10, 0.10, 0.50, 30, None, None),
    ("Apple",           "PS", 0.09, 0.09, 0.09, 0.20, 0.40, 6, None, 4),
    ("AppleSliced",     "P",  0.015, 0.05, 0.06, 0.05, 0.40, 6, None, None),
    ("Tomato",          "PS", 0.08, 0.08, 0.08, 0.15, 0.40, 5, None, 4),
    ("TomatoSliced",    "P",  0.013, 0.05, 0.05, 0.04, 0.40, 5, None, None),
    ("Potato",          "PS", 0.11, 0.06, 0.08, 0.25, 0.50, 5, None, 4),
    ("PotatoSliced",    "P",  0.018, 0.04, 0.05, 0.06, 0.50, 5, None, None),
    ("Lettuce",         "PS", 0.16, 0.14, 0.16, 0.40, 0.45, 4, None, 3),
    ("LettuceSliced",   "P",  0.03, 0.08, 0.10, 0.12, 0.45, 4, None, None),
    ("Cucumber",        "PS", 0.20, 0.05, 0.05, 0.20, 0.40, 4, None, 5),
    ("CucumberSliced",  "P",  0.025, 0.035, 0.035, 0.03, 0.40, 4, None, None),
    ("Egg",             "P",  0.05, 0.06, 0.05, 0.06, 0.35, 3, None, None),
    ("Mug",             "P",  0.10, 0.10, 0.12, 0.30, 0.45, 8, None, None),
    ("Cup",             "P",  0.08, 0.11, 0.08, 0.20, 0.45, 6, None, None),
    ("Plate",           "P",  0.24, 0.03, 0.24, 0.40, 0.40, 6, None, None),
    ("Bowl",            "PR", 0.16, 0.08, 0.16, 0.35, 0.45, 6, "container", None),
    ("Pan",             "PR", 0.26, 0.06, 0.26, 0.80, 0.35, 4, "container", None),
    ("Pot",             "PR", 0.22, 0.14, 0.22, 1.20, 0.40, 4, "container", None),
    ("Kettle",          "P",  0.18, 0.20, 0.18, 0.90, 0.40, 3, None, None),
    ("Knife",           "P",  0.03, 0.03, 0.30, 0.15, 0.30, 4, None, None),
    ("ButterKnife",     "P",  0.03, 0.02, 0.20, 0.08, 0.30, 3, None, None),
    ("Fork",            "P",  0.03, 0.02, 0.19, 0.06, 0.30, 3, None, None),
    ("Spoon",           "P",  0.03, 0.02, 0.19, 0.06, 0.30, 3, None, None),
    ("Spatula",         "P",  0.07, 0.03, 0.32, 0.10, 0.30, 3, None, None),
    ("Ladle",           "P",  0.08, 0.07, 0.30, 0.15, 0.30, 3, None, None),
    ("DishSponge",      "P",  0.10, 0.04, 0.07, 0.03, 0.80, 3, None, None),
    ("Sponge",          "P",  0.11, 0.05, 0.08, 0.03, 0.80, 3, None, None),
    ("SoapBottle",      "P",  0.07, 0.18, 0.07, 0.35, 0.40, 4, None, None),
    ("SaltShaker",      "P",  0.05, 0.10, 0.05, 0.12, 0.40, 3, None, None),
    ("PepperShaker",    "P",  0.05, 0.10, 0.05, 0.12, 0.40, 3, None, None),
    ("PaperTowelRoll",  "P",  0.11, 0.24, 0.11, 0.25, 0.60, 3, None, None),
    ("WineBottle",      "P",  0.08, 0.30, 0.08, 1.10, 0.35, 4, None, None),
    # -- kitchen: furniture and appliances -------------------------------
    ("Fridge",          "OR",  0.90, 1.80, 0.70, 120.0, 0.50, 4, "enclosed", None),
    ("Microwave",       "OTR", 0.55, 0.35, 0.42, 12.0, 0.50, 4, "enclosed", None),
    ("Oven",            "OTR", 0.76, 0.90, 0.66, 45.0, 0.50, 3, "enclosed", None),
    ("Dishwasher",      "OR",  0.60, 0.85, 0.60, 35.0, 0.50, 3, "enclosed", None),
    ("Toaster",         "TM",  0.28, 0.18, 0.18, 1.90, 0.50, 4, None, None),
    ("CoffeeMachine",   "TR",  0.25, 0.35, 0.30, 4.00, 0.50, 4, "surface", None),
    ("StoveBurner",     "T",   0.25, 0.05, 0.25, 3.00, 0.50, 4, None, None),
    ("StoveKnob",       "T",   0.04, 0.04, 0.03, 0.05, 0.50, 4, None, None),
    ("Sink",            "R",   0.65, 0.90, 0.55, 25.0, 0.50, 3, "container", None),
    ("Faucet",          "T",   0.10, 0.25, 0.18, 1.50, 0.50, 3, None, None),
    ("CounterTop",      "R",   1.80, 0.95, 0.65, 80.0, 0.50, 3, "surface", None),
    ("DiningTable",     "R",   1.60, 0.75, 0.90, 30.0, 0.50, 3, "surface", None),
    ("Cabinet",         "OR",  0.60, 0.70, 0.50, 20.0, 0.50, 4, "enclosed", None),
    ("Drawer",          "OR",  0.55, 0.20, 0.50, 8.00, 0.50, 4, "enclosed", None),
    ("Shelf",           "R",   0.80, 0.04, 0.30, 4.00, 0.50, 3, "surface", None),
    ("GarbageCan",      "RM",  0.35, 0.50, 0.35, 2.50, 0.50, 4, "container", None),
    ("Stool",           "M",   0.35, 0.45, 0.35, 3.00, 0.50, 3, None, None),
    ("Chair",           "M",   0.45, 0.90, 0.45, 5.00, 0.50, 4, None, None),
    # -- living room ------------------------------------------------------
    ("Sofa",            "R",   1.90, 0.45, 0.85, 40.0, 0.60, 4, "surface", None),
    ("ArmChair",        "R",   0.85, 0.45, 0.80, 18.0, 0.60, 4, "surface", None),
    ("CoffeeTable",     "R",   1.10, 0.45, 0.60, 12.0, 0.50, 4, "surface", None),
    ("SideTable",       "R",   0.50, 0.55, 0.50, 7.00, 0.50, 4, "surface", None),
    ("TVStand",         "R",   1.40, 0.50, 0.45, 20.0, 0.50, 3, "surface", None),
    ("Television",      "T",   1.10, 0.65, 0.08, 12.0, 0.50, 4, None, None),
    ("RemoteControl",   "P",   0.05, 0.02, 0.16, 0.10, 0.40, 4, None, None),
    ("Laptop",          "POT", 0.33, 0.03, 0.23, 2.00, 0.40, 4, None, None),
    ("Book",            "PO",  0.15, 0.04, 0.22, 0.50, 0.40, 6, None, None),
    ("Newspaper",       "P",   0.20, 0.02, 0.30, 0.20, 0.50, 3, None, None),
    ("Box",             "POR", 0.40, 0.30, 0.40, 1.00, 0.50, 4, "enclosed", None),
    ("FloorLamp",       "T",   0.30, 1.60, 0.30, 5.00, 0.50, 4, None, None),
    ("TableLamp",       "TM",  0.22, 0.42, 0.22, 2.20, 0.50, 4, None, None),
    ("DeskLamp",        "TM",  0.18, 0.40, 0.18, 1.80, 0.50, 4, None, None),
    ("Candle",          "PT",  0.05, 0.12, 0.05, 0.15, 0.40, 4, None, None),
    ("Statue",          "M",   0.25, 0.60, 0.25, 8.00, 0.50, 5, None, None),
    ("Vase",            "P",   0.12, 0.30, 0.12, 0.80, 0.40, 6, None, None),
    ("Pillow",          "P",   0.45, 0.12, 0.30, 0.50, 0.70, 5, None, None),
    ("HousePlant",      "M",   0.35, 0.90, 0.35, 6.00, 0.50, 5, None, None),
    ("KeyChain",        "P",   0.05, 0.02, 0.08, 0.05, 0.40, 3, None, None),
    ("CreditCard",      "P",   0.06, 0.01, 0.09, 0.01, 0.30, 3, None, None),
    ("CellPhone",       "PT",  0.07, 0.01, 0.15, 0.18, 0.40, 4, None, None),
    ("Pen",             "P",   0.02, 0.02, 0.14, 0.02, 0.30, 3, None, None),
    ("Pencil",          "P",   0.01, 0.01, 0.18, 0.01, 0.30, 3, None, None),
    # -- bedroom ----------------------------------------------------------
    ("Bed",             "R",   1.90, 0.50, 1.50, 60.0, 0.60, 4, "surface", None),
    ("Dresser",         "OR",  1.10, 0.80, 0.50, 40.0, 0.50, 3, "enclosed", None),
    ("Desk",            "R",   1.30, 0.72, 0.65, 25.0, 0.50, 3, "surface", None),
    ("AlarmClock",      "PT",  0.11, 0.09, 0.06, 0.30, 0.40, 4, None, None),
    ("CD",              "P",   0.12, 0.01, 0.12, 0.02, 0.30, 3, None, None),
    ("LaundryHamper",   "RM",  0.40, 0.55, 0.40, 2.00, 0.50, 3, "container", None),
    ("TeddyBear",       "P",   0.25, 0.35, 0.20, 0.40, 0.70, 5, None, None),
    ("BaseballBat",     "P",   0.07, 0.85, 0.07, 0.90, 0.45, 3, None, None),
    ("BasketBall",      "P",   0.24, 0.24, 0.24, 0.60, 0.50, 3, None, None),
    ("TennisRacket",    "P",   0.28, 0.68, 0.03, 0.30, 0.40, 3, None, None),
    ("Blinds",          "O",   1.20, 1.40, 0.06, 3.00, 0.50, 3, None, None),
    ("Window",          "O",   1.20, 1.30, 0.10, 8.00, 0.50, 3, None, None),
    ("Cloth",           "P",   0.30, 0.02, 0.30, 0.20, 0.70, 4, None, None),
    ("Safe",            "OR",  0.45, 0.45, 0.45, 30.0, 0.50, 3, "enclosed", None),
    # -- bathroom ---------------------------------------------------------
    ("Bathtub",         "R",   1.60, 0.55, 0.75, 80.0, 0.40, 3, "container", None),
    ("ShowerDoor",      "OG",  1.00, 2.00, 0.05, 15.0, 0.30, 3, None, None),
    ("ShowerHead",      "T",   0.12, 0.12, 0.20, 0.80, 0.40, 3, None, None),
    ("Toilet",          "O",   0.45, 0.75, 0.65, 35.0, 0.40, 3, None, None),
    ("ToiletPaper",     "P",   0.11, 0.11, 0.11, 0.15, 0.60, 3, None, None),
    ("ToiletPaperHanger", "R", 0.16, 0.04, 0.12, 0.40, 0.50, 3, "surface", None),
    ("Towel",           "P",   0.50, 0.02, 0.35, 0.40, 0.70, 4, None, None),
    ("TowelHolder",     "R",   0.60, 0.05, 0.08, 1.00, 0.50, 3, "surface", None),
    ("HandTowel",       "P",   0.25, 0.02, 0.18, 0.15, 0.70, 3, None, None),
    ("SoapBar",         "P",   0.09, 0.03, 0.06, 0.10, 0.30, 3, None, None),
    ("Plunger",         "P",   0.14, 0.55, 0.14, 0.70, 0.50, 3, None, None),
    ("ScrubBrush",      "P",   0.08, 0.25, 0.08, 0.20, 0.50, 3, None, None),
    ("SprayBottle",     "P",   0.08, 0.26, 0.08, 0.40, 0.40, 3, None, None),
]

# Clutter classes: placed by the generator for realism, excluded from step
# metadata, never targets of actions.
_CLUTTER_ROWS: list[tuple] = [
    ("StickyNote", 0.08, 0.08, 0.01),
    ("Poster",     0.60, 0.80, 0.01),
    ("Rug",        1.20, 0.01, 0.80),
    ("Magnet",     0.04, 0.04, 0.01),
]

# Per-category open-state geometry that the default "door swings forward"
# rule does not cover.
_OPEN_OVERRIDES = {
    # Sliding glass door: open state is the same panel slid along -x so the
    # doorway clears.
    "ShowerDoor": lambda w, h, d: Aabb(Vec3(-w / 2 - w * 0.95, 0, -d / 2), Vec3(w / 2 - w * 0.95, h, d / 2)),
    # Rolled up against the lintel.
    "Blinds": lambda w, h, d: Aabb(Vec3(-w / 2, h * 0.82, -d / 2), Vec3(w / 2, h, d / 2)),
    # Lower sash slides behind the upper one.
    "Window": lambda w, h, d: Aabb(Vec3(-w / 2, h * 0.5, -d / 2), Vec3(w / 2, h, d / 2)),
    # Lid up.
    "Toilet": lambda w, h, d: Aabb(Vec3(-w / 2, 0, -d / 2), Vec3(w / 2, h + 0.25, d / 2)),
    "Laptop": lambda w, h, d: Aabb(Vec3(-w / 2, 0, -d / 2), Vec3(w / 2, 0.25, d / 2)),
    # Laid open flat, twice the footprint.
    "Book": lambda w, h, d: Aabb(Vec3(-w, 0, -d / 2), Vec3(w, h * 0.6, d / 2)),
}

# Container basins whose floor sits higher than the default.
_BASIN_FLOOR_FRACTION = {"Sink": 0.70, "Bathtub": 0.25}


def _interior_box(style: str, w: float, h: float, d: float, category: str) -> Aabb:
    if style == "surface":
        return Aabb(Vec3(-w / 2, h, -d / 2), Vec3(w / 2, h + SURFACE_CLEARANCE, d / 2))
    t = min(WALL, w * 0.2, d * 0.2)
    if style == "container":
        floor = h * _BASIN_FLOOR_FRACTION.get(category, 0.2)
        return Aabb(Vec3(-w / 2 + t, floor, -d / 2 + t), Vec3(w / 2 - t, h, d / 2 - t))
    if style == "enclosed":
        return Aabb(Vec3(-w / 2 + t, t, -d / 2 + t), Vec3(w / 2 - t, h - t, d / 2 - t))
    raise ValueError(f"unknown receptacle style {style!r}")


def _build_class(row: tuple) -> ObjectClass:
    category, flags, w, h, d, mass, mu, nvar, style, slices = row
    pickupable = "P" in flags
    openable = "O" in flags
    receptacle = "R" in flags
    closed = _box(w, h, d)
    if receptacle and style == "surface":
        # Class box includes the open airspace where contents rest.
        closed = _box(w, h + SURFACE_CLEARANCE, d)
    open_ext = None
    if openable:
        override = _OPEN_OVERRIDES.get(category)
        if override is not None:
            open_ext = override(w, h, d)
        else:
            door = min(0.45, d * 0.6)
            open_ext = Aabb(Vec3(-w / 2, 0, -d / 2), Vec3(w / 2, h, d / 2 + door))
    interior = _interior_box(style, w, h, d, category) if receptacle else None
    return ObjectClass(
        category=category,
        interactable=True,
        pickupable=pickupable,
        openable=openable,
        toggleable="T" in flags,
        sliceable="S" in flags,
        receptacle=receptacle,
        transparent="G" in flags,
        movable_static=MOVABLE if (pickupable or "M" in flags) else STATIC,
        num_variants=nvar,
        variant_params=_variants(category, nvar),
        mass=mass,
        friction_coeff=mu,
        restitution=0.0,
        closed_extents=closed,
        open_extents=open_ext,
        interior_extents=interior,
        slice_count=slices,
    )


def _build_clutter(row: tuple) -> ObjectClass:
    category, w, h, d = row
    return ObjectClass(
        category=category,
        interactable=False,
        pickupable=False,
        openable=False,
        toggleable=False,
        sliceable=False,
        receptacle=False,
        transparent=False,
        movable_static=STATIC,
        num_variants=3,
        variant_params=_variants(category, 3),
        mass=0.1,
        friction_coeff=0.5,
        restitution=0.0,
        closed_extents=_box(w, h, d),
    )


@dataclass(frozen=True)
class ObjectClassCatalog:
    classes: dict[str, ObjectClass] = field(default_factory=dict)

    def get(self, category: str) -> ObjectClass:
        try:
            return self.classes[category]
        except KeyError:
            raise UnknownCategoryError(category) from None

    def __contains__(self, category: str) -> bool:
        return category in self.classes

    def interactable_categories(self) -> list[str]:
        return sorted(c.category for c in self.classes.values() if c.interactable)

    def validate(self) -> list:
        violations = []
        for name, cls in self.classes.items():
            path = f"catalog[{name}]"
            if cls.num_variants < 1:
                violations.append(Violation("BadValue", f"{path}.numVariants", "must be >= 1"))
            if len(cls.variant_params) != cls.num_variants:
                violations.append(Violation("BadValue", f"{path}.variantParams", "length mismatch"))
            if cls.pickupable and cls.movable_static != MOVABLE:
                violations.append(Violation("BadValue", f"{path}.movableStatic", "pickupable implies movable"))
            if cls.openable and cls.open_extents is None:
                violations.append(Violation("BadValue", f"{path}.openExtents", "required for openable"))
            if cls.receptacle and cls.interior_extents is None:
                violations.append(Violation("BadValue", f"{path}.interiorExtents", "required for receptacle"))
            if cls.sliceable and (cls.slice_count is None or cls.slice_count < 1):
                violations.append(Violation("BadValue", f"{path}.sliceCount", "required for sliceable"))
            if cls.sliceable and f"{name}Sliced" not in self.classes:
                violations.append(Violation("BadReference", f"{path}", f"missing {name}Sliced class"))
            if cls.interior_extents is not None and not cls.closed_extents.contains_box(cls.interior_extents, 1e-9):
                violations.append(Violation("ContainmentViolation", f"{path}.interiorExtents", "not inside closedExtents"))
        return violations

    def to_json(self) -> str:
        records = []
        for name in sorted(self.classes):
            c = self.classes[name]
            rec = {
                "category": c.category,
                "interactable": c.interactable,
                "pickupable": c.pickupable,
                "openable": c.openable,
                "toggleable": c.toggleable,
                "sliceable": c.sliceable,
                "receptacle": c.receptacle,
                "transparent": c.transparent,
                "movable_static": c.movable_static,
                "num_variants": c.num_variants,
                "variant_params": [
                    {"color": list(v.color), "scale": v.scale} for v in c.variant_params
                ],
                "mass": c.mass,
                "friction_coeff": c.friction_coeff,
                "restitution": c.restitution,
                "closed_extents": c.closed_extents.to_dict(),
                "open_extents": c.open_extents.to_dict() if c.open_extents else None,
                "interior_extents": c.interior_extents.to_dict() if c.interior_extents else None,
                "slice_count": c.slice_count,
            }
            records.append(rec)
        return json.dumps({"classes": records}, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "ObjectClassCatalog":
        data = json.loads(text)
        classes = {}
        for rec in data["classes"]:
            classes[rec["category"]] = ObjectClass(
                category=rec["category"],
                interactable=rec["interactable"],
                pickupable=rec["pickupable"],
                openable=rec["openable"],
                toggleable=rec["toggleable"],
                sliceable=rec["sliceable"],
                receptacle=rec["receptacle"],
                transparent=rec["transparent"],
                movable_static=rec["movable_static"],
                num_variants=rec["num_variants"],
                variant_params=tuple(
                    VariantParams(color=tuple(v["color"]), scale=v["scale"])
                    for v in rec["variant_params"]
                ),
                mass=rec["mass"],
                friction_coeff=rec["friction_coeff"],
                restitution=rec["restitution"],
                closed_extents=Aabb.from_dict(rec["closed_extents"]),
                open_extents=Aabb.from_dict(rec["open_extents"]) if rec["open_extents"] else None,
                interior_extents=Aabb.from_dict(rec["interior_extents"]) if rec["interior_extents"] else None,
                slice_count=rec["slice_count"],
            )
        return ObjectClassCatalog(classes)


def build_catalog() -> ObjectClassCatalog:
    classes = {}
    for row in _ROWS:
        cls = _build_class(row)
        classes[cls.category] = cls
    for row in _CLUTTER_ROWS:
        cls = _build_clutter(row)
        classes[cls.category] = cls
    catalog = ObjectClassCatalog(classes)
    violations = catalog.validate()
    if violations:
        raise ValidationError(violations)
    return catalog


_DEFAULT: ObjectClassCatalog | None = None


def default_catalog() -> ObjectClassCatalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = build_catalog()
    return _DEFAULT
