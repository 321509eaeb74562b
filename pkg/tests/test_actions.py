import pytest

from hearth.actions import (
    ActionRequest,
    RequestSchemaError,
    SessionConfig,
    parse_action_request,
    request_to_mapping,
    step,
)
from hearth.geometry import Vec3
from hearth.rng import CounterRng
from hearth.scene import validate_scene, world_aabb
from hearth.sceneio import serialize_scene
from hearth.scenegen import generate_scene

from conftest import add_object, make_room


def run(scene, req, config=None, catalog=None):
    return step(scene, config or SessionConfig(), req, catalog)


# ---------------------------------------------------------------------------
# schema


def test_parse_round_trip():
    req = ActionRequest(action="ApplyForce", object_id="Mug_1", magnitude=2.0, direction=Vec3(1, 0, 0))
    again = parse_action_request(request_to_mapping(req))
    assert again == req


def test_parse_rejects_bad_shapes():
    with pytest.raises(RequestSchemaError):
        parse_action_request([])
    with pytest.raises(RequestSchemaError):
        parse_action_request({})
    with pytest.raises(RequestSchemaError):
        parse_action_request({"action": 7})
    with pytest.raises(RequestSchemaError):
        parse_action_request({"action": "MoveAhead", "magnitude": "far"})
    with pytest.raises(RequestSchemaError):
        parse_action_request({"action": "Teleport", "position": [1, 2]})


def test_unknown_verb_is_in_band_failure():
    scene = make_room()
    outcome, _ = run(scene, ActionRequest(action="FlyUp"))
    assert not outcome.success
    assert outcome.error_code == "InvalidAction"


def test_unknown_object_id():
    scene = make_room()
    outcome, _ = run(scene, ActionRequest(action="OpenObject", object_id="Ghost_1"))
    assert outcome.error_code == "InvalidObjectId"


def test_failures_leave_state_bit_identical():
    scene = make_room()
    add_object(scene, "Fridge", "Fridge_1", Vec3(3.0, 0.0, 4.0))
    before = serialize_scene(scene)
    for req in (
        ActionRequest(action="FlyUp"),
        ActionRequest(action="OpenObject", object_id="Ghost_1"),
        ActionRequest(action="OpenObject", object_id="Fridge_1"),  # too far
        ActionRequest(action="PickupObject", object_id="Fridge_1"),
        ActionRequest(action="LookUp"),
        ActionRequest(action="LookUp"),  # second LookUp hits the -30 clamp
        ActionRequest(action="PutObject", receptacle_id="Fridge_1"),
        ActionRequest(action="ThrowObject"),
        ActionRequest(action="SliceObject", object_id="Fridge_1"),
    ):
        outcome, _ = run(scene, req)
        if not outcome.success:
            assert serialize_scene(scene) == before, req.action
        else:
            before = serialize_scene(scene)


# ---------------------------------------------------------------------------
# navigation


def test_move_ahead_advances_grid_size():
    scene = make_room()
    outcome, _ = run(scene, ActionRequest(action="MoveAhead"))
    assert outcome.success
    assert scene.agent.position == Vec3(3.0, 0.0, 1.25)


def test_move_blocked_by_near_wall():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0), agent_yaw=0)
    # statue with its near face 0.1 m beyond the capsule surface
    cls_scale = 1.0
    add_object(scene, "Fridge", "Fridge_1", Vec3(3.0, 0.0, 1.65))
    before = scene.agent.position
    outcome, _ = run(scene, ActionRequest(action="MoveAhead"))
    assert not outcome.success
    assert outcome.error_code == "Blocked"
    assert scene.agent.position == before


def test_move_directions_are_relative_to_yaw():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 3.0), agent_yaw=90)
    run(scene, ActionRequest(action="MoveLeft"))
    assert scene.agent.position == Vec3(3.0, 0.0, 3.25)  # left of +x facing is +z
    run(scene, ActionRequest(action="MoveBack"))
    assert scene.agent.position == Vec3(2.75, 0.0, 3.25)


def test_rotate_wraps():
    scene = make_room(agent_yaw=270)
    run(scene, ActionRequest(action="RotateRight"))
    assert scene.agent.rotation_yaw == 0
    run(scene, ActionRequest(action="RotateLeft"))
    assert scene.agent.rotation_yaw == 270


def test_look_clamps_at_bounds():
    scene = make_room()
    scene.agent.camera_horizon = 60
    outcome, _ = run(scene, ActionRequest(action="LookDown"))
    assert outcome.error_code == "OutOfRange"
    assert scene.agent.camera_horizon == 60
    for expect in (30, 0, -30):
        outcome, _ = run(scene, ActionRequest(action="LookUp"))
        assert outcome.success and scene.agent.camera_horizon == expect
    outcome, _ = run(scene, ActionRequest(action="LookUp"))
    assert outcome.error_code == "OutOfRange" and scene.agent.camera_horizon == -30


def test_teleport_validates_target():
    scene = make_room()
    add_object(scene, "Fridge", "Fridge_1", Vec3(3.0, 0.0, 4.0))
    outcome, _ = run(scene, ActionRequest(action="Teleport", position=Vec3(3.0, 0.0, 4.0)))
    assert outcome.error_code == "Blocked"
    outcome, _ = run(scene, ActionRequest(action="Teleport", position=Vec3(1.0, 0.0, 1.0), rotation=180))
    assert outcome.success
    assert scene.agent.position == Vec3(1.0, 0.0, 1.0)
    assert scene.agent.rotation_yaw == 180
    outcome, _ = run(scene, ActionRequest(action="Teleport", position=Vec3(9.0, 0.0, 1.0)))
    assert outcome.error_code == "Blocked"  # outside the floor


# ---------------------------------------------------------------------------
# open / close


def _microwave_scene(distance):
    """Microwave floating at counter height so its bounds straddle the
    agent-center height; nearest-point distance equals ``distance``."""
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0), agent_yaw=0)
    from hearth.catalog import default_catalog

    cls = default_catalog().get("Microwave")
    s = cls.variant_params[0].scale
    half_d = cls.closed_extents.size().z / 2 * s
    add_object(scene, "Microwave", "Microwave_1", Vec3(3.0, 0.7, 1.0 + distance + half_d), yaw=180)
    return scene


def test_open_microwave_far_fails_near_succeeds():
    far = _microwave_scene(2.0)
    outcome, _ = run(far, ActionRequest(action="OpenObject", object_id="Microwave_1"))
    assert not outcome.success
    assert outcome.error_code == "NotInteractable"
    assert far.find("Microwave_1").is_open is False

    near = _microwave_scene(1.0)
    outcome, _ = run(near, ActionRequest(action="OpenObject", object_id="Microwave_1"))
    assert outcome.success, outcome
    assert near.find("Microwave_1").is_open is True


def test_open_then_close_round_trip():
    scene = _microwave_scene(1.0)
    run(scene, ActionRequest(action="OpenObject", object_id="Microwave_1"))
    outcome, _ = run(scene, ActionRequest(action="OpenObject", object_id="Microwave_1"))
    assert outcome.error_code == "AlreadyOpen"
    outcome, _ = run(scene, ActionRequest(action="CloseObject", object_id="Microwave_1"))
    assert outcome.success
    outcome, _ = run(scene, ActionRequest(action="CloseObject", object_id="Microwave_1"))
    assert outcome.error_code == "AlreadyClosed"


def test_open_statue_not_openable():
    scene = make_room()
    add_object(scene, "Statue", "Statue_1", Vec3(3.0, 0.0, 2.0))
    outcome, _ = run(scene, ActionRequest(action="OpenObject", object_id="Statue_1"))
    assert outcome.error_code == "NotOpenable"


def test_open_blocked_when_door_would_hit_agent():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0), agent_yaw=0)
    # microwave close enough that the opening door sweeps into the capsule
    from hearth.catalog import default_catalog

    cls = default_catalog().get("Microwave")
    s = cls.variant_params[0].scale
    half_d = cls.closed_extents.size().z / 2 * s
    add_object(scene, "Microwave", "Microwave_1", Vec3(3.0, 0.7, 1.0 + 0.25 + half_d), yaw=180)
    outcome, _ = run(scene, ActionRequest(action="OpenObject", object_id="Microwave_1"))
    assert outcome.error_code == "Blocked"
    assert scene.find("Microwave_1").is_open is False


# ---------------------------------------------------------------------------
# pickup / put


def _bread_on_table(scene_pos=Vec3(3.0, 0.0, 1.0)):
    scene = make_room(agent_pos=scene_pos, agent_yaw=0)
    scene.agent.camera_horizon = 30  # table items sit below a level gaze
    table = add_object(scene, "SideTable", "SideTable_1", Vec3(3.0, 0.0, 1.8))
    from hearth.catalog import default_catalog

    catalog = default_catalog()
    from hearth.scene import interior_world

    interior = interior_world(table, catalog)
    bread = add_object(
        scene,
        "Bread",
        "Bread_1",
        Vec3(3.0, interior.min.y, interior.min.z + 0.15),
        parent_receptacle="SideTable_1",
    )
    table.contained_ids.append("Bread_1")
    return scene, bread, table


def test_pickup_and_put_cycle(catalog):
    scene, bread, table = _bread_on_table()
    assert validate_scene(scene, catalog) == []
    outcome, _ = run(scene, ActionRequest(action="PickupObject", object_id="Bread_1"))
    assert outcome.success, outcome
    assert bread.is_picked_up
    assert bread.parent_receptacle is None
    assert "Bread_1" not in table.contained_ids
    assert scene.agent.held_object_id == "Bread_1"

    outcome, _ = run(scene, ActionRequest(action="PickupObject", object_id="Bread_1"))
    assert outcome.error_code in ("HandFull", "NotInteractable")

    outcome, _ = run(scene, ActionRequest(action="PutObject", receptacle_id="SideTable_1"))
    assert outcome.success, outcome
    assert not bread.is_picked_up
    assert bread.parent_receptacle == "SideTable_1"
    assert "Bread_1" in table.contained_ids
    assert scene.agent.held_object_id is None
    assert validate_scene(scene, catalog) == []


def test_pickup_held_pose_follows_agent(catalog):
    scene, bread, _ = _bread_on_table()
    run(scene, ActionRequest(action="PickupObject", object_id="Bread_1"))
    p0 = bread.position
    run(scene, ActionRequest(action="RotateRight"))
    assert bread.rotation_yaw == scene.agent.rotation_yaw
    assert bread.position != p0
    run(scene, ActionRequest(action="MoveBack"))
    expected = scene.agent.position + Vec3(0.3 * 1.0, 1.375, 0.0).scaled(1.0)
    # carry pose: 0.3 m along facing (now +x), 0.2 m below eye height
    assert bread.position.y == pytest.approx(1.375)


def test_pickup_while_hand_full():
    scene, bread, table = _bread_on_table()
    catalog = None
    from hearth.catalog import default_catalog

    catalog = default_catalog()
    from hearth.scene import interior_world

    interior = interior_world(table, catalog)
    mug = add_object(
        scene,
        "Mug",
        "Mug_1",
        Vec3(2.8, interior.min.y, interior.min.z + 0.2),
        parent_receptacle="SideTable_1",
    )
    table.contained_ids.append("Mug_1")
    run(scene, ActionRequest(action="PickupObject", object_id="Mug_1"))
    assert scene.agent.held_object_id == "Mug_1"
    outcome, _ = run(scene, ActionRequest(action="PickupObject", object_id="Bread_1"))
    assert outcome.error_code == "HandFull"


def test_put_into_closed_receptacle_fails():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    scene_fr = add_object(scene, "Fridge", "Fridge_1", Vec3(3.0, 0.0, 2.2))
    mug = add_object(scene, "Mug", "Mug_1", Vec3(3.0, 1.375, 1.3), is_picked_up=True)
    scene.agent.held_object_id = "Mug_1"
    outcome, _ = run(scene, ActionRequest(action="PutObject", receptacle_id="Fridge_1"))
    assert outcome.error_code == "ClosedReceptacle"


def test_put_with_empty_hand():
    scene = make_room()
    add_object(scene, "SideTable", "SideTable_1", Vec3(3.0, 0.0, 1.8))
    outcome, _ = run(scene, ActionRequest(action="PutObject", receptacle_id="SideTable_1"))
    assert outcome.error_code == "HandEmpty"


def test_put_no_space(catalog):
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    hanger = add_object(scene, "ToiletPaperHanger", "ToiletPaperHanger_1", Vec3(3.0, 0.9, 1.5))
    # held object larger than the hanger's interior footprint
    pillow = add_object(scene, "Pillow", "Pillow_1", Vec3(3.0, 1.375, 1.3), is_picked_up=True)
    scene.agent.held_object_id = "Pillow_1"
    outcome, _ = run(scene, ActionRequest(action="PutObject", receptacle_id="ToiletPaperHanger_1"))
    assert outcome.error_code == "NoSpace"


# ---------------------------------------------------------------------------
# toggle


def test_toggle_cycle():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    add_object(scene, "FloorLamp", "FloorLamp_1", Vec3(3.0, 0.0, 2.0))
    outcome, _ = run(scene, ActionRequest(action="ToggleObjectOn", object_id="FloorLamp_1"))
    assert outcome.success
    assert scene.find("FloorLamp_1").is_toggled
    outcome, _ = run(scene, ActionRequest(action="ToggleObjectOn", object_id="FloorLamp_1"))
    assert outcome.error_code == "AlreadyToggled"
    outcome, _ = run(scene, ActionRequest(action="ToggleObjectOff", object_id="FloorLamp_1"))
    assert outcome.success
    assert not scene.find("FloorLamp_1").is_toggled


def test_toggle_statue_not_toggleable():
    scene = make_room()
    add_object(scene, "Statue", "Statue_1", Vec3(3.0, 0.0, 2.0))
    outcome, _ = run(scene, ActionRequest(action="ToggleObjectOn", object_id="Statue_1"))
    assert outcome.error_code == "NotToggleable"


def test_toggle_beyond_range_not_interactable():
    scene = make_room()
    add_object(scene, "FloorLamp", "FloorLamp_1", Vec3(3.0, 0.0, 3.5))
    outcome, _ = run(scene, ActionRequest(action="ToggleObjectOn", object_id="FloorLamp_1"))
    assert outcome.error_code == "NotInteractable"


# ---------------------------------------------------------------------------
# slice


def test_slice_bread_spawns_pieces(catalog):
    scene, bread, table = _bread_on_table()
    count = catalog.get("Bread").slice_count
    outcome, _ = run(scene, ActionRequest(action="SliceObject", object_id="Bread_1"))
    assert outcome.success, outcome
    assert scene.find("Bread_1") is None
    pieces = [o for o in scene.objects if o.category == "BreadSliced"]
    assert len(pieces) == count
    assert {p.object_id for p in pieces} == {f"BreadSliced_1_{k}" for k in range(count)}
    assert all(p.parent_receptacle == "SideTable_1" for p in pieces)
    assert sorted(table.contained_ids) == sorted(p.object_id for p in pieces)
    assert validate_scene(scene, catalog) == []


def test_slice_a_slice_fails(catalog):
    scene, bread, table = _bread_on_table()
    run(scene, ActionRequest(action="SliceObject", object_id="Bread_1"))
    outcome, _ = run(scene, ActionRequest(action="SliceObject", object_id="BreadSliced_1_0"))
    assert outcome.error_code == "NotSliceable"


def test_slice_statue_fails():
    scene = make_room()
    add_object(scene, "Statue", "Statue_1", Vec3(3.0, 0.0, 2.0))
    outcome, _ = run(scene, ActionRequest(action="SliceObject", object_id="Statue_1"))
    assert outcome.error_code == "NotSliceable"


# ---------------------------------------------------------------------------
# forces


def test_apply_force_sets_velocity_then_settles(catalog):
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    scene.agent.camera_horizon = 30  # floor objects need a downward gaze
    book = add_object(scene, "Book", "Book_1", Vec3(3.0, 0.0, 1.6))
    outcome, _ = run(
        scene,
        ActionRequest(action="ApplyForce", object_id="Book_1", magnitude=2.0, direction=Vec3(0, 0, 1)),
    )
    assert outcome.success, outcome
    # settle ran: the book slid and stopped
    assert book.velocity.length() == 0.0
    assert book.position.z > 2.0
    assert validate_scene(scene, catalog) == []


def test_apply_force_static_fails():
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    add_object(scene, "Cabinet", "Cabinet_1", Vec3(3.0, 0.0, 1.8))
    outcome, _ = run(
        scene,
        ActionRequest(action="ApplyForce", object_id="Cabinet_1", magnitude=2.0, direction=Vec3(0, 0, 1)),
    )
    assert outcome.error_code == "NotMovable"


def test_throw_released_along_camera_forward(catalog):
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0))
    mug = add_object(scene, "Mug", "Mug_1", Vec3(3.0, 1.375, 1.3), is_picked_up=True)
    scene.agent.held_object_id = "Mug_1"
    outcome, _ = run(scene, ActionRequest(action="ThrowObject", magnitude=2.0))
    assert outcome.success
    assert not mug.is_picked_up
    assert scene.agent.held_object_id is None
    assert mug.position.z > 1.3  # flew forward and landed
    assert mug.velocity.length() == 0.0
    assert validate_scene(scene, catalog) == []


def test_throw_with_empty_hand():
    scene = make_room()
    outcome, _ = run(scene, ActionRequest(action="ThrowObject", magnitude=2.0))
    assert outcome.error_code == "HandEmpty"


# ---------------------------------------------------------------------------
# initialize / reset / randomize


def test_initialize_applies_config():
    scene = make_room()
    config = SessionConfig()
    outcome, _ = run(scene, ActionRequest(action="Initialize", width=300, height=300, grid_size=0.5), config)
    assert outcome.success
    assert config.grid_size == 0.5
    run(scene, ActionRequest(action="MoveAhead"), config)
    assert scene.agent.position.z == pytest.approx(1.5)


def test_initialize_rejects_out_of_range():
    scene = make_room()
    config = SessionConfig()
    for bad in (
        dict(width=32),
        dict(height=16),
        dict(grid_size=0.01),
        dict(grid_size=2.0),
        dict(visibility_distance=-1.0),
    ):
        outcome, _ = run(scene, ActionRequest(action="Initialize", **bad), config)
        assert outcome.error_code == "OutOfRange", bad
    assert config.width == 300 and config.grid_size == 0.25


def test_reset_restores_generated_scene(catalog):
    scene = generate_scene(17, catalog)
    original = serialize_scene(scene)
    run(scene, ActionRequest(action="MoveAhead"))
    run(scene, ActionRequest(action="RotateRight"))
    assert serialize_scene(scene) != original
    outcome, _ = run(scene, ActionRequest(action="Reset"))
    assert outcome.success
    assert serialize_scene(scene) == original


def test_reset_deterministic(catalog):
    a = generate_scene(5, catalog)
    b = generate_scene(5, catalog)
    run(a, ActionRequest(action="Reset"))
    run(b, ActionRequest(action="Reset"))
    assert serialize_scene(a) == serialize_scene(b)


def test_randomize_objects_action_matches_library(catalog):
    from hearth.scenegen import randomize_objects

    scene = generate_scene(17, catalog)
    expect = serialize_scene(randomize_objects(scene, 42, catalog))
    outcome, _ = run(scene, ActionRequest(action="RandomizeObjects", seed=42))
    assert outcome.success
    assert serialize_scene(scene) == expect


def test_stop_is_noop_success():
    scene = make_room()
    before = serialize_scene(scene)
    outcome, _ = run(scene, ActionRequest(action="Stop"))
    assert outcome.success
    assert serialize_scene(scene) == before


def test_nonzero_agent_id_rejected():
    scene = make_room()
    outcome, _ = run(scene, ActionRequest(action="MoveAhead", agent_id=1))
    assert outcome.error_code == "InvalidAction"


# ---------------------------------------------------------------------------
# fuzz: precondition completeness


def test_fuzz_requests_never_crash(golden_scene, catalog):
    from hearth.actions import ALL_ACTIONS
    from hearth.errors import Violation

    scene = golden_scene.copy()
    config = SessionConfig()
    rng = CounterRng("fuzz", 1)
    ids = [o.object_id for o in scene.objects] + ["Ghost_1", "Wall_1", ""]
    valid_codes = {
        "None", "InvalidAction", "InvalidObjectId", "NotVisible", "NotInteractable",
        "NotOpenable", "AlreadyOpen", "AlreadyClosed", "NotPickupable", "HandFull",
        "HandEmpty", "NoSpace", "ClosedReceptacle", "NotToggleable", "AlreadyToggled",
        "NotSliceable", "AlreadySliced", "NotMovable", "Blocked", "OutOfRange",
    }
    steps = 2000
    for i in range(steps):
        action = rng.choice(ALL_ACTIONS + ("Nonsense",))
        req = ActionRequest(
            action=action,
            object_id=rng.choice(ids) if rng.uniform() < 0.8 else None,
            receptacle_id=rng.choice(ids) if rng.uniform() < 0.4 else None,
            magnitude=rng.uniform(-1.0, 8.0) if rng.uniform() < 0.5 else None,
            direction=Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
            if rng.uniform() < 0.5
            else None,
            position=Vec3(rng.uniform(-1, 7), 0.0, rng.uniform(-1, 7)) if rng.uniform() < 0.3 else None,
            rotation=rng.choice((0, 90, 180, 270, 45)) if rng.uniform() < 0.3 else None,
            horizon=rng.choice((-30, 0, 30, 60, 15, 90)) if rng.uniform() < 0.3 else None,
            seed=rng.randint(0, 10) if rng.uniform() < 0.2 else None,
        )
        outcome, _ = step(scene, config, req, catalog)
        assert outcome.error_code in valid_codes
        assert outcome.success == (outcome.error_code == "None")
        if i % 250 == 0:
            assert validate_scene(scene, catalog) == []
    assert validate_scene(scene, catalog) == []


def test_fuzz_flag_legality(golden_scene, catalog):
    scene = golden_scene.copy()
    config = SessionConfig()
    rng = CounterRng("fuzz-flags", 2)
    ids = [o.object_id for o in scene.objects]
    verbs = ("OpenObject", "CloseObject", "ToggleObjectOn", "ToggleObjectOff", "SliceObject", "PickupObject", "PutObject")
    for _ in range(800):
        req = ActionRequest(action=rng.choice(verbs), object_id=rng.choice(ids), receptacle_id=rng.choice(ids))
        step(scene, config, req, catalog)
    for inst in scene.objects:
        cls = catalog.get(inst.category)
        assert not (inst.is_open and not cls.openable)
        assert not (inst.is_toggled and not cls.toggleable)
        assert not (inst.is_sliced and not cls.sliceable)
        assert not (inst.is_picked_up and not cls.pickupable)
