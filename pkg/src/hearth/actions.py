"""Discrete action state machine: schema checks, preconditions, effects.

Every handler validates all of its preconditions before touching state, so
a failed action leaves the scene byte-identical. Failures are data (an
ActionOutcome with an error code), never exceptions; step() itself cannot
abort on any schema-valid request.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dataclass_fields

from .camera import EYE_HEIGHT, camera_for_agent
from .errors import HearthError, PlacementFailure
from .geometry import Vec3, rotate_box_yaw, yaw_forward
from .physics import DEFAULT_PHYSICS, apply_impulse, settle
from .scene import SKIN, Scene, capsule_box_distance, collider_parts, world_aabb
from .spatial import (
    Bvh,
    build_bvh,
    capsule_free_distance,
    capsule_pose_free,
    fit_in_receptacle,
    placement_to_position,
)
from .visibility import target_visibility

# Action vocabulary
INITIALIZE = "Initialize"
RESET = "Reset"
MOVE_AHEAD = "MoveAhead"
MOVE_BACK = "MoveBack"
MOVE_LEFT = "MoveLeft"
MOVE_RIGHT = "MoveRight"
ROTATE_RIGHT = "RotateRight"
ROTATE_LEFT = "RotateLeft"
LOOK_UP = "LookUp"
LOOK_DOWN = "LookDown"
OPEN_OBJECT = "OpenObject"
CLOSE_OBJECT = "CloseObject"
PICKUP_OBJECT = "PickupObject"
PUT_OBJECT = "PutObject"
TOGGLE_ON = "ToggleObjectOn"
TOGGLE_OFF = "ToggleObjectOff"
SLICE_OBJECT = "SliceObject"
APPLY_FORCE = "ApplyForce"
THROW_OBJECT = "ThrowObject"
TELEPORT = "Teleport"
RANDOMIZE_OBJECTS = "RandomizeObjects"
STOP = "Stop"

ALL_ACTIONS = (
    INITIALIZE, RESET, MOVE_AHEAD, MOVE_BACK, MOVE_LEFT, MOVE_RIGHT,
    ROTATE_RIGHT, ROTATE_LEFT, LOOK_UP, LOOK_DOWN, OPEN_OBJECT, CLOSE_OBJECT,
    PICKUP_OBJECT, PUT_OBJECT, TOGGLE_ON, TOGGLE_OFF, SLICE_OBJECT,
    APPLY_FORCE, THROW_OBJECT, TELEPORT, RANDOMIZE_OBJECTS, STOP,
)

# Error codes
OK = "None"
INVALID_ACTION = "InvalidAction"
INVALID_OBJECT_ID = "InvalidObjectId"
NOT_VISIBLE = "NotVisible"
NOT_INTERACTABLE = "NotInteractable"
NOT_OPENABLE = "NotOpenable"
ALREADY_OPEN = "AlreadyOpen"
ALREADY_CLOSED = "AlreadyClosed"
NOT_PICKUPABLE = "NotPickupable"
HAND_FULL = "HandFull"
HAND_EMPTY = "HandEmpty"
NO_SPACE = "NoSpace"
CLOSED_RECEPTACLE = "ClosedReceptacle"
NOT_TOGGLEABLE = "NotToggleable"
ALREADY_TOGGLED = "AlreadyToggled"
NOT_SLICEABLE = "NotSliceable"
ALREADY_SLICED = "AlreadySliced"
NOT_MOVABLE = "NotMovable"
BLOCKED = "Blocked"
OUT_OF_RANGE = "OutOfRange"

DEFAULT_GRID_SIZE = 0.25
ROTATE_STEP = 90
LOOK_STEP = 30
HORIZON_MIN = -30
HORIZON_MAX = 60
CARRY_AHEAD = 0.3
CARRY_BELOW_EYE = 0.2
DEFAULT_THROW_IMPULSE = 1.0


class RequestSchemaError(HearthError):
    """Raised when a request mapping fails the wire schema (transport-level
    400, as opposed to in-band action failures)."""


@dataclass(slots=True)
class ActionRequest:
    action: str
    object_id: str | None = None
    receptacle_id: str | None = None
    magnitude: float | None = None
    direction: Vec3 | None = None
    position: Vec3 | None = None
    rotation: int | None = None
    horizon: int | None = None
    seed: int | None = None
    agent_id: int = 0
    grid_size: float | None = None
    visibility_distance: float | None = None
    width: int | None = None
    height: int | None = None
    render_depth: bool | None = None
    render_instance_ids: bool | None = None


@dataclass(frozen=True, slots=True)
class ActionOutcome:
    success: bool
    error_code: str = OK
    error_message: str = ""

    @staticmethod
    def ok() -> "ActionOutcome":
        return ActionOutcome(True)

    @staticmethod
    def fail(code: str, message: str) -> "ActionOutcome":
        return ActionOutcome(False, code, message)


@dataclass(slots=True)
class SessionConfig:
    grid_size: float = DEFAULT_GRID_SIZE
    visibility_distance: float = 1.5
    width: int = 300
    height: int = 300
    render_depth: bool = False
    render_instance_ids: bool = False


_REQUEST_KEYS = {
    "action": str,
    "objectId": str,
    "receptacleId": str,
    "magnitude": (int, float),
    "direction": list,
    "position": list,
    "rotation": int,
    "horizon": int,
    "seed": int,
    "agentId": int,
    "gridSize": (int, float),
    "visibilityDistance": (int, float),
    "width": int,
    "height": int,
    "renderDepth": bool,
    "renderInstanceIds": bool,
}


def _schema_vec(value, key: str) -> Vec3:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise RequestSchemaError(f"{key} must be [x, y, z]")
    if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value):
        raise RequestSchemaError(f"{key} components must be numbers")
    return Vec3(float(value[0]), float(value[1]), float(value[2]))


def parse_action_request(mapping) -> ActionRequest:
    """Validate a wire mapping against the request schema.

    Wrong shapes and types raise RequestSchemaError; unknown action verbs
    pass through (they fail in-band as InvalidAction), and unknown keys
    are ignored for forward compatibility.
    """
    if not isinstance(mapping, dict):
        raise RequestSchemaError("request body must be an object")
    if "action" not in mapping or not isinstance(mapping["action"], str) or not mapping["action"]:
        raise RequestSchemaError("missing or invalid 'action'")
    for key, expected in _REQUEST_KEYS.items():
        if key in mapping and mapping[key] is not None:
            value = mapping[key]
            if isinstance(value, bool) and expected is not bool and key != "action":
                raise RequestSchemaError(f"{key} has wrong type")
            if not isinstance(value, expected):
                raise RequestSchemaError(f"{key} has wrong type")
    req = ActionRequest(action=mapping["action"])
    if mapping.get("objectId") is not None:
        req.object_id = mapping["objectId"]
    if mapping.get("receptacleId") is not None:
        req.receptacle_id = mapping["receptacleId"]
    if mapping.get("magnitude") is not None:
        req.magnitude = float(mapping["magnitude"])
    if mapping.get("direction") is not None:
        req.direction = _schema_vec(mapping["direction"], "direction")
    if mapping.get("position") is not None:
        req.position = _schema_vec(mapping["position"], "position")
    if mapping.get("rotation") is not None:
        req.rotation = int(mapping["rotation"])
    if mapping.get("horizon") is not None:
        req.horizon = int(mapping["horizon"])
    if mapping.get("seed") is not None:
        req.seed = int(mapping["seed"])
    if mapping.get("agentId") is not None:
        req.agent_id = int(mapping["agentId"])
    if mapping.get("gridSize") is not None:
        req.grid_size = float(mapping["gridSize"])
    if mapping.get("visibilityDistance") is not None:
        req.visibility_distance = float(mapping["visibilityDistance"])
    if mapping.get("width") is not None:
        req.width = int(mapping["width"])
    if mapping.get("height") is not None:
        req.height = int(mapping["height"])
    if mapping.get("renderDepth") is not None:
        req.render_depth = bool(mapping["renderDepth"])
    if mapping.get("renderInstanceIds") is not None:
        req.render_instance_ids = bool(mapping["renderInstanceIds"])
    return req


def request_to_mapping(req: ActionRequest) -> dict:
    out: dict = {"action": req.action}
    if req.object_id is not None:
        out["objectId"] = req.object_id
    if req.receptacle_id is not None:
        out["receptacleId"] = req.receptacle_id
    if req.magnitude is not None:
        out["magnitude"] = req.magnitude
    if req.direction is not None:
        out["direction"] = req.direction.to_list()
    if req.position is not None:
        out["position"] = req.position.to_list()
    if req.rotation is not None:
        out["rotation"] = req.rotation
    if req.horizon is not None:
        out["horizon"] = req.horizon
    if req.seed is not None:
        out["seed"] = req.seed
    if req.agent_id != 0:
        out["agentId"] = req.agent_id
    if req.grid_size is not None:
        out["gridSize"] = req.grid_size
    if req.visibility_distance is not None:
        out["visibilityDistance"] = req.visibility_distance
    if req.width is not None:
        out["width"] = req.width
    if req.height is not None:
        out["height"] = req.height
    if req.render_depth is not None:
        out["renderDepth"] = req.render_depth
    if req.render_instance_ids is not None:
        out["renderInstanceIds"] = req.render_instance_ids
    return out


# ---------------------------------------------------------------------------
# Stepping


class StepContext:
    """Per-step view of the session: scene, config, and a collider index."""

    def __init__(self, scene: Scene, config: SessionConfig, catalog, bvh: Bvh | None = None):
        self.scene = scene
        self.config = config
        self.catalog = catalog
        self.bvh = bvh if bvh is not None else build_bvh(scene, catalog)
        self.colliders_changed = False

    def camera(self):
        return camera_for_agent(self.scene.agent, self.config.width, self.config.height)

    def interactability(self, inst):
        return target_visibility(
            inst,
            self.scene,
            self.camera(),
            self.config.visibility_distance,
            self.catalog,
            self.bvh,
        )


def step(
    scene: Scene,
    config: SessionConfig,
    req: ActionRequest,
    catalog=None,
    bvh: Bvh | None = None,
) -> tuple[ActionOutcome, bool]:
    """Run one action. Returns (outcome, colliders_changed). The scene is
    mutated only on success; failures leave it untouched."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    ctx = StepContext(scene, config, catalog, bvh)
    if req.agent_id != 0:
        return ActionOutcome.fail(INVALID_ACTION, "only agent 0 exists"), False
    handler = _HANDLERS.get(req.action)
    if handler is None:
        return ActionOutcome.fail(INVALID_ACTION, f"unknown action {req.action!r}"), False
    outcome = handler(ctx, req)
    return outcome, ctx.colliders_changed


def _carry_pose(agent) -> tuple[Vec3, int]:
    ahead = yaw_forward(agent.rotation_yaw).scaled(CARRY_AHEAD)
    p = agent.position
    pos = Vec3(p.x + ahead.x, p.y + EYE_HEIGHT - CARRY_BELOW_EYE, p.z + ahead.z)
    return pos, agent.rotation_yaw


def _sync_held(ctx: StepContext) -> None:
    held_id = ctx.scene.agent.held_object_id
    if held_id is None:
        return
    inst = ctx.scene.find(held_id)
    if inst is None:
        return
    inst.position, inst.rotation_yaw = _carry_pose(ctx.scene.agent)


def _settle(ctx: StepContext) -> None:
    settle(ctx.scene, ctx.catalog, DEFAULT_PHYSICS)
    ctx.colliders_changed = True


# -- navigation --------------------------------------------------------------

_MOVE_YAW_OFFSET = {MOVE_AHEAD: 0, MOVE_RIGHT: 90, MOVE_BACK: 180, MOVE_LEFT: 270}


def _handle_move(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    magnitude = req.magnitude if req.magnitude is not None else ctx.config.grid_size
    if magnitude <= 0:
        return ActionOutcome.fail(OUT_OF_RANGE, "move magnitude must be positive")
    agent = ctx.scene.agent
    direction = yaw_forward(agent.rotation_yaw + _MOVE_YAW_OFFSET[req.action])
    free = capsule_free_distance(agent, direction.scaled(magnitude), ctx.bvh.colliders)
    if free + 1e-12 < magnitude:
        return ActionOutcome.fail(BLOCKED, f"path blocked after {free:.3f} m")
    agent.position = agent.position + direction.scaled(magnitude)
    _sync_held(ctx)
    return ActionOutcome.ok()


def _handle_rotate(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    delta = ROTATE_STEP if req.action == ROTATE_RIGHT else -ROTATE_STEP
    agent = ctx.scene.agent
    agent.rotation_yaw = (agent.rotation_yaw + delta) % 360
    _sync_held(ctx)
    return ActionOutcome.ok()


def _handle_look(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    agent = ctx.scene.agent
    delta = -LOOK_STEP if req.action == LOOK_UP else LOOK_STEP
    target = agent.camera_horizon + delta
    if target < HORIZON_MIN or target > HORIZON_MAX:
        return ActionOutcome.fail(OUT_OF_RANGE, f"camera horizon {target} outside [{HORIZON_MIN}, {HORIZON_MAX}]")
    agent.camera_horizon = target
    return ActionOutcome.ok()


def _validate_pose_fields(req: ActionRequest) -> ActionOutcome | None:
    if req.rotation is not None and req.rotation % 90 != 0:
        return ActionOutcome.fail(OUT_OF_RANGE, "rotation must be a multiple of 90")
    if req.horizon is not None and (
        req.horizon % 30 != 0 or not HORIZON_MIN <= req.horizon <= HORIZON_MAX
    ):
        return ActionOutcome.fail(OUT_OF_RANGE, "horizon must be a multiple of 30 in [-30, 60]")
    return None


def _try_teleport(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    bad = _validate_pose_fields(req)
    if bad is not None:
        return bad
    agent = ctx.scene.agent
    candidate = agent.copy()
    if req.position is not None:
        candidate.position = Vec3(req.position.x, 0.0, req.position.z)
    if req.rotation is not None:
        candidate.rotation_yaw = req.rotation % 360
    if req.horizon is not None:
        candidate.camera_horizon = req.horizon
    fb = ctx.scene.floor_bounds
    r = candidate.capsule_radius
    if not (
        fb.min.x + r <= candidate.position.x <= fb.max.x - r
        and fb.min.z + r <= candidate.position.z <= fb.max.z - r
    ):
        return ActionOutcome.fail(BLOCKED, "teleport target outside the floor")
    if not capsule_pose_free(candidate, ctx.bvh.colliders):
        return ActionOutcome.fail(BLOCKED, "teleport target collides")
    agent.position = candidate.position
    agent.rotation_yaw = candidate.rotation_yaw
    agent.camera_horizon = candidate.camera_horizon
    _sync_held(ctx)
    return ActionOutcome.ok()


def _handle_teleport(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    if req.position is None and req.rotation is None and req.horizon is None:
        return ActionOutcome.fail(OUT_OF_RANGE, "teleport requires position, rotation, or horizon")
    return _try_teleport(ctx, req)


# -- object state ------------------------------------------------------------


def _target(ctx: StepContext, object_id: str | None):
    if object_id is None:
        return None, ActionOutcome.fail(INVALID_OBJECT_ID, "objectId is required")
    inst = ctx.scene.find(object_id)
    if inst is None:
        return None, ActionOutcome.fail(INVALID_OBJECT_ID, f"no object {object_id!r}")
    return inst, None


def _require_interactable(ctx: StepContext, inst) -> ActionOutcome | None:
    entry = ctx.interactability(inst)
    if not entry.interactable:
        return ActionOutcome.fail(
            NOT_INTERACTABLE,
            f"{inst.object_id} is not interactable (distance {entry.distance:.2f} m)",
        )
    return None


def _swap_would_block(ctx: StepContext, inst, want_open: bool) -> bool:
    was_open = inst.is_open
    inst.is_open = want_open
    try:
        new_parts = collider_parts(inst, ctx.catalog)
    finally:
        inst.is_open = was_open
    from .geometry import overlap_depth

    contents = set(inst.contained_ids)
    for part in new_parts:
        if capsule_box_distance(ctx.scene.agent, part) < -SKIN:
            return True
        for c in ctx.bvh.colliders:
            if c.owner == inst.object_id or c.owner in contents:
                continue
            if overlap_depth(part, c.box) > SKIN:
                return True
    return False


def _handle_open_close(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    inst, err = _target(ctx, req.object_id)
    if err:
        return err
    cls = ctx.catalog.get(inst.category)
    if not cls.openable:
        return ActionOutcome.fail(NOT_OPENABLE, f"{inst.category} cannot be opened")
    blocked = _require_interactable(ctx, inst)
    if blocked:
        return blocked
    want_open = req.action == OPEN_OBJECT
    if inst.is_open == want_open:
        code = ALREADY_OPEN if want_open else ALREADY_CLOSED
        return ActionOutcome.fail(code, f"{inst.object_id} is already {'open' if want_open else 'closed'}")
    if _swap_would_block(ctx, inst, want_open):
        return ActionOutcome.fail(BLOCKED, "new collider extents would interpenetrate")
    inst.is_open = want_open
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_pickup(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    inst, err = _target(ctx, req.object_id)
    if err:
        return err
    cls = ctx.catalog.get(inst.category)
    if not cls.pickupable:
        return ActionOutcome.fail(NOT_PICKUPABLE, f"{inst.category} cannot be picked up")
    blocked = _require_interactable(ctx, inst)
    if blocked:
        return blocked
    agent = ctx.scene.agent
    if agent.held_object_id is not None:
        return ActionOutcome.fail(HAND_FULL, f"already holding {agent.held_object_id}")
    if inst.parent_receptacle is not None:
        parent = ctx.scene.find(inst.parent_receptacle)
        if parent is not None and inst.object_id in parent.contained_ids:
            parent.contained_ids.remove(inst.object_id)
        inst.parent_receptacle = None
    for child_id in list(inst.contained_ids):
        child = ctx.scene.find(child_id)
        if child is not None:
            child.parent_receptacle = None
        inst.contained_ids.remove(child_id)
    inst.is_picked_up = True
    inst.velocity = Vec3(0.0, 0.0, 0.0)
    agent.held_object_id = inst.object_id
    inst.position, inst.rotation_yaw = _carry_pose(agent)
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_put(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    agent = ctx.scene.agent
    if agent.held_object_id is None:
        return ActionOutcome.fail(HAND_EMPTY, "nothing is held")
    receptacle_id = req.receptacle_id if req.receptacle_id is not None else req.object_id
    receptacle, err = _target(ctx, receptacle_id)
    if err:
        return err
    rcls = ctx.catalog.get(receptacle.category)
    if not rcls.receptacle:
        return ActionOutcome.fail(NO_SPACE, f"{receptacle.category} is not a receptacle")
    blocked = _require_interactable(ctx, receptacle)
    if blocked:
        return blocked
    if rcls.openable and not receptacle.is_open:
        return ActionOutcome.fail(CLOSED_RECEPTACLE, f"{receptacle.object_id} is closed")
    held = ctx.scene.find(agent.held_object_id)
    assert held is not None
    held_box = world_aabb(held, ctx.catalog)
    target_min = fit_in_receptacle(
        held_box, receptacle, ctx.scene, ctx.catalog, exclude_ids={held.object_id}
    )
    if target_min is None:
        return ActionOutcome.fail(NO_SPACE, f"{held.object_id} fits nowhere in {receptacle.object_id}")
    held.position = placement_to_position(held, ctx.catalog, target_min)
    held.is_picked_up = False
    held.velocity = Vec3(0.0, 0.0, 0.0)
    held.parent_receptacle = receptacle.object_id
    receptacle.contained_ids.append(held.object_id)
    receptacle.contained_ids.sort()
    agent.held_object_id = None
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_toggle(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    inst, err = _target(ctx, req.object_id)
    if err:
        return err
    cls = ctx.catalog.get(inst.category)
    if not cls.toggleable:
        return ActionOutcome.fail(NOT_TOGGLEABLE, f"{inst.category} cannot be toggled")
    blocked = _require_interactable(ctx, inst)
    if blocked:
        return blocked
    want_on = req.action == TOGGLE_ON
    if inst.is_toggled == want_on:
        return ActionOutcome.fail(ALREADY_TOGGLED, f"{inst.object_id} is already {'on' if want_on else 'off'}")
    inst.is_toggled = want_on
    return ActionOutcome.ok()


def _slice_row_axis(yaw: int) -> str:
    # Slices run along the world image of the source's local +x axis.
    return "x" if yaw % 180 == 0 else "z"


def _handle_slice(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    inst, err = _target(ctx, req.object_id)
    if err:
        return err
    cls = ctx.catalog.get(inst.category)
    if not cls.sliceable:
        return ActionOutcome.fail(NOT_SLICEABLE, f"{inst.category} cannot be sliced")
    if inst.is_sliced:
        return ActionOutcome.fail(ALREADY_SLICED, f"{inst.object_id} is already sliced")
    blocked = _require_interactable(ctx, inst)
    if blocked:
        return blocked
    piece_cls = ctx.catalog.get(f"{inst.category}Sliced")
    count = cls.slice_count
    box = world_aabb(inst, ctx.catalog)
    axis = _slice_row_axis(inst.rotation_yaw)
    row_start = getattr(box.min, axis)
    row_len = getattr(box.max, axis) - row_start
    spacing = row_len / count
    base = inst.object_id.split("_", 1)[1] if "_" in inst.object_id else inst.object_id
    variant = inst.variant_index % piece_cls.num_variants
    parent_id = inst.parent_receptacle

    pieces = []
    for k in range(count):
        center_along = row_start + (k + 0.5) * spacing
        local = rotate_box_yaw(piece_cls.closed_for_variant(variant), inst.rotation_yaw)
        cx = box.center().x
        cz = box.center().z
        if axis == "x":
            cx = center_along
        else:
            cz = center_along
        # instance position is the bottom-center of the rotated local box
        pos = Vec3(cx - (local.min.x + local.max.x) / 2, box.min.y - local.min.y, cz - (local.min.z + local.max.z) / 2)
        pieces.append(
            type(inst)(
                object_id=f"{inst.category}Sliced_{base}_{k}",
                category=f"{inst.category}Sliced",
                variant_index=variant,
                position=pos,
                rotation_yaw=inst.rotation_yaw,
                parent_receptacle=parent_id,
            )
        )

    if parent_id is not None:
        parent = ctx.scene.find(parent_id)
        if parent is not None:
            if inst.object_id in parent.contained_ids:
                parent.contained_ids.remove(inst.object_id)
            parent.contained_ids.extend(p.object_id for p in pieces)
            parent.contained_ids.sort()
    ctx.scene.objects.remove(inst)
    ctx.scene.objects.extend(pieces)
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_apply_force(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    inst, err = _target(ctx, req.object_id)
    if err:
        return err
    if req.magnitude is None or req.magnitude < 0:
        return ActionOutcome.fail(OUT_OF_RANGE, "magnitude must be a non-negative impulse")
    if req.direction is None or req.direction.length() == 0.0:
        return ActionOutcome.fail(OUT_OF_RANGE, "direction must be a non-zero vector")
    cls = ctx.catalog.get(inst.category)
    if not cls.movable:
        return ActionOutcome.fail(NOT_MOVABLE, f"{inst.category} is static")
    blocked = _require_interactable(ctx, inst)
    if blocked:
        return blocked
    apply_impulse(inst, cls, req.magnitude, req.direction.normalized())
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_throw(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    agent = ctx.scene.agent
    if agent.held_object_id is None:
        return ActionOutcome.fail(HAND_EMPTY, "nothing is held")
    magnitude = req.magnitude if req.magnitude is not None else DEFAULT_THROW_IMPULSE
    if magnitude < 0:
        return ActionOutcome.fail(OUT_OF_RANGE, "magnitude must be a non-negative impulse")
    held = ctx.scene.find(agent.held_object_id)
    assert held is not None
    cls = ctx.catalog.get(held.category)
    camera = ctx.camera()
    forward, _, _ = camera.basis()
    held.is_picked_up = False
    agent.held_object_id = None
    apply_impulse(held, cls, magnitude, forward)
    _settle(ctx)
    return ActionOutcome.ok()


def _handle_initialize(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    cfg = ctx.config
    grid = req.grid_size if req.grid_size is not None else cfg.grid_size
    vis = req.visibility_distance if req.visibility_distance is not None else cfg.visibility_distance
    width = req.width if req.width is not None else cfg.width
    height = req.height if req.height is not None else cfg.height
    if not 0.05 <= grid <= 1.0:
        return ActionOutcome.fail(OUT_OF_RANGE, "gridSize must be in [0.05, 1.0]")
    if vis <= 0:
        return ActionOutcome.fail(OUT_OF_RANGE, "visibilityDistance must be positive")
    if width < 64 or height < 64:
        return ActionOutcome.fail(OUT_OF_RANGE, "resolution must be at least 64x64")
    if req.position is not None or req.rotation is not None or req.horizon is not None:
        outcome = _try_teleport(ctx, req)
        if not outcome.success:
            return outcome
    cfg.grid_size = grid
    cfg.visibility_distance = vis
    cfg.width = width
    cfg.height = height
    if req.render_depth is not None:
        cfg.render_depth = req.render_depth
    if req.render_instance_ids is not None:
        cfg.render_instance_ids = req.render_instance_ids
    return ActionOutcome.ok()


def _replace_scene_contents(dst: Scene, src: Scene) -> None:
    for f in dataclass_fields(Scene):
        setattr(dst, f.name, getattr(src, f.name))


def _handle_reset(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    from .scenegen import generate_scene

    fresh = generate_scene(ctx.scene.scene_number, ctx.catalog)
    _replace_scene_contents(ctx.scene, fresh)
    ctx.colliders_changed = True
    return ActionOutcome.ok()


def _handle_randomize(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    from .scenegen import randomize_objects

    seed = req.seed if req.seed is not None else 0
    try:
        shuffled = randomize_objects(ctx.scene, seed, ctx.catalog)
    except PlacementFailure as exc:
        return ActionOutcome.fail(NO_SPACE, str(exc))
    _replace_scene_contents(ctx.scene, shuffled)
    ctx.colliders_changed = True
    return ActionOutcome.ok()


def _handle_stop(ctx: StepContext, req: ActionRequest) -> ActionOutcome:
    return ActionOutcome.ok()


_HANDLERS = {
    MOVE_AHEAD: _handle_move,
    MOVE_BACK: _handle_move,
    MOVE_LEFT: _handle_move,
    MOVE_RIGHT: _handle_move,
    ROTATE_LEFT: _handle_rotate,
    ROTATE_RIGHT: _handle_rotate,
    LOOK_UP: _handle_look,
    LOOK_DOWN: _handle_look,
    TELEPORT: _handle_teleport,
    OPEN_OBJECT: _handle_open_close,
    CLOSE_OBJECT: _handle_open_close,
    PICKUP_OBJECT: _handle_pickup,
    PUT_OBJECT: _handle_put,
    TOGGLE_ON: _handle_toggle,
    TOGGLE_OFF: _handle_toggle,
    SLICE_OBJECT: _handle_slice,
    APPLY_FORCE: _handle_apply_force,
    THROW_OBJECT: _handle_throw,
    INITIALIZE: _handle_initialize,
    RESET: _handle_reset,
    RANDOMIZE_OBJECTS: _handle_randomize,
    STOP: _handle_stop,
}
