import pytest

from hearth.camera import camera_for_agent
from hearth.geometry import Vec3
from hearth.rng import CounterRng
from hearth.spatial import build_bvh
from hearth.visibility import compute_interactability, compute_visibility, full_visibility

from conftest import add_object, lamp_at_distance, make_room


def _report(scene, catalog, distance=1.5):
    camera = camera_for_agent(scene.agent)
    return full_visibility(scene, camera, distance, catalog)


def test_unoccluded_object_within_reach_visible(catalog):
    scene = lamp_at_distance(1.4, catalog)
    report = _report(scene, catalog)
    assert report.visible("FloorLamp_1")
    assert report.interactable("FloorLamp_1")
    assert report.distance("FloorLamp_1") == pytest.approx(1.4)


def test_threshold_sharpness(catalog):
    near = _report(lamp_at_distance(1.49, catalog), catalog)
    far = _report(lamp_at_distance(1.51, catalog), catalog)
    assert near.visible("FloorLamp_1") is True
    assert far.visible("FloorLamp_1") is False
    assert far.distance("FloorLamp_1") == pytest.approx(1.51)


def test_object_behind_agent_not_visible(catalog):
    scene = make_room()
    add_object(scene, "FloorLamp", "FloorLamp_1", Vec3(3.0, 0.0, 0.3))
    # agent at z=1 faces +z; lamp at z=0.3 sits behind
    report = _report(scene, catalog)
    assert report.visible("FloorLamp_1") is False
    assert report.distance("FloorLamp_1") < 1.0


def _glass_door_scene(catalog, door_open=False):
    scene = make_room()
    # door panel ahead of the agent; the sponge hangs at caddy height just
    # behind the glass, well within the agent-center visibility range
    add_object(scene, "ShowerDoor", "ShowerDoor_1", Vec3(3.0, 0.0, 1.8), is_open=door_open)
    add_object(scene, "Sponge", "Sponge_1", Vec3(3.0, 0.95, 2.1))
    return scene


def test_glass_door_blocks_interaction_not_sight(catalog):
    scene = _glass_door_scene(catalog, door_open=False)
    report = _report(scene, catalog)
    assert report.visible("Sponge_1") is True
    assert report.interactable("Sponge_1") is False
    # the door itself is both
    assert report.visible("ShowerDoor_1") is True
    assert report.interactable("ShowerDoor_1") is True


def test_open_glass_door_restores_interactability(catalog):
    scene = _glass_door_scene(catalog, door_open=True)
    report = _report(scene, catalog)
    assert report.visible("Sponge_1") is True
    assert report.interactable("Sponge_1") is True


def test_opaque_occluder_blocks_sight(catalog):
    scene = make_room()
    add_object(scene, "Fridge", "Fridge_1", Vec3(3.0, 0.0, 1.7))
    add_object(scene, "Sponge", "Sponge_1", Vec3(3.0, 0.95, 2.3))
    report = _report(scene, catalog)
    # the fridge is opaque and tall: sponge hidden entirely
    assert report.visible("Sponge_1") is False
    assert report.interactable("Sponge_1") is False


def test_interactable_implies_visible_everywhere(golden_scene, catalog):
    rng = CounterRng("vis-prop")
    scene = golden_scene.copy()
    bvh = build_bvh(scene, catalog)
    fb = scene.floor_bounds
    for _ in range(25):
        scene.agent.position = Vec3(
            0.5 + rng.uniform() * (fb.max.x - 1.0), 0.0, 0.5 + rng.uniform() * (fb.max.z - 1.0)
        )
        scene.agent.rotation_yaw = rng.choice((0, 90, 180, 270))
        scene.agent.camera_horizon = rng.choice((-30, 0, 30, 60))
        report = full_visibility(scene, camera_for_agent(scene.agent), 1.5, catalog, bvh)
        for object_id, entry in report.entries.items():
            assert not (entry.interactable and not entry.visible), object_id


def test_two_stage_computation_matches_full(golden_scene, catalog):
    camera = camera_for_agent(golden_scene.agent)
    bvh = build_bvh(golden_scene, catalog)
    staged = compute_visibility(golden_scene, camera, 1.5, catalog, bvh)
    staged = compute_interactability(golden_scene, camera, staged, 1.5, catalog, bvh)
    full = full_visibility(golden_scene, camera, 1.5, catalog, bvh)
    assert {k: (e.visible, e.interactable) for k, e in staged.entries.items()} == {
        k: (e.visible, e.interactable) for k, e in full.entries.items()
    }


def test_held_object_not_visible_by_cast_rule(catalog):
    scene = make_room()
    mug = add_object(scene, "Mug", "Mug_1", Vec3(3.0, 1.375, 1.3), is_picked_up=True)
    scene.agent.held_object_id = "Mug_1"
    report = _report(scene, catalog)
    assert report.visible("Mug_1") is False
    assert report.interactable("Mug_1") is False
