"""Acceptance criteria, one test per criterion.

Each test prints `ACCEPTANCE <name>: PASS (t)` on success (run pytest with
-s to see the lines live) and enforces both the stated tolerances and the
stated runtime budget.
"""

import hashlib
import http.server
import threading
import time
from contextlib import contextmanager

import numpy as np
import pytest

from hearth.actions import ActionRequest, SessionConfig, step
from hearth.bench import MODE_METADATA, MODE_RENDER, build_action_script, run_benchmark
from hearth.camera import camera_for_agent
from hearth.events import decode_event, encode_action_request, encode_event
from hearth.geometry import Vec3
from hearth.physics import DEFAULT_PHYSICS, apply_impulse, integrate_step, settle
from hearth.render import render_frame
from hearth.rng import CounterRng
from hearth.scene import scene_colliders, world_aabb
from hearth.sceneio import serialize_scene
from hearth.scenegen import generate_scene
from hearth.session import Session
from hearth.spatial import Ray, build_bvh, capsule_free_distance, cast_colliders
from hearth.visibility import full_visibility

from conftest import add_object, lamp_at_distance, make_room

G = DEFAULT_PHYSICS.gravity


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL ({time.perf_counter() - start:.2f} s)")
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {name}: PASS ({elapsed:.2f} s)")
    assert elapsed < budget_s, f"{name} exceeded its {budget_s} s budget: {elapsed:.2f} s"


def test_visibility_threshold_fidelity(catalog):
    with criterion("visibility-threshold", 1.0):
        near = lamp_at_distance(1.49, catalog)
        report = full_visibility(near, camera_for_agent(near.agent), 1.5, catalog)
        assert report.visible("FloorLamp_1") is True

        far = lamp_at_distance(1.51, catalog)
        report = full_visibility(far, camera_for_agent(far.agent), 1.5, catalog)
        assert report.visible("FloorLamp_1") is False
        # the rendered-but-not-visible case: id still appears on screen
        frame = render_frame(far, camera_for_agent(far.agent), catalog, render_instance_ids=True)
        idx = frame.id_table.index("FloorLamp_1")
        assert (frame.instance_ids == idx).any()


def test_transparency_semantics(catalog):
    with criterion("transparency-semantics", 1.0):
        scene = make_room()
        add_object(scene, "ShowerDoor", "ShowerDoor_1", Vec3(3.0, 0.0, 1.8))
        add_object(scene, "Sponge", "Sponge_1", Vec3(3.0, 0.95, 2.1))
        report = full_visibility(scene, camera_for_agent(scene.agent), 1.5, catalog)
        assert report.visible("Sponge_1") is True
        assert report.interactable("Sponge_1") is False
        before = serialize_scene(scene)
        outcome, _ = step(scene, SessionConfig(), ActionRequest(action="PickupObject", object_id="Sponge_1"), catalog)
        assert outcome.success is False
        assert outcome.error_code == "NotInteractable"
        assert serialize_scene(scene) == before


def _microwave_at(distance: float, catalog):
    scene = make_room(agent_pos=Vec3(3.0, 0.0, 1.0), agent_yaw=0)
    cls = catalog.get("Microwave")
    half_d = cls.closed_extents.size().z / 2 * cls.variant_params[0].scale
    add_object(scene, "Microwave", "Microwave_1", Vec3(3.0, 0.7, 1.0 + distance + half_d), yaw=180)
    return scene


def test_precondition_microwave_distance(catalog):
    with criterion("microwave-precondition", 1.0):
        far = _microwave_at(2.0, catalog)
        outcome, _ = step(far, SessionConfig(), ActionRequest(action="OpenObject", object_id="Microwave_1"), catalog)
        assert outcome.success is False
        assert far.find("Microwave_1").is_open is False

        near = _microwave_at(1.0, catalog)
        outcome, _ = step(near, SessionConfig(), ActionRequest(action="OpenObject", object_id="Microwave_1"), catalog)
        assert outcome.success is True
        assert near.find("Microwave_1").is_open is True


def _scripted_run(render_workers: int) -> tuple[bytes, str]:
    session = Session(scene_number=17)
    script = build_action_script(17, 50)
    digest = hashlib.sha256()
    for req in script:
        event = session.step(req, render_workers=render_workers)
        digest.update(event.frame.rgb)
    return session.state_bytes(), digest.hexdigest()


def test_determinism_suite():
    with criterion("determinism", 30.0):
        for n in (1, 17, 60, 91, 120):
            assert serialize_scene(generate_scene(n)) == serialize_scene(generate_scene(n)), n
        state_a, frames_a = _scripted_run(render_workers=1)
        state_b, frames_b = _scripted_run(render_workers=1)
        state_c, frames_c = _scripted_run(render_workers=4)
        assert state_a == state_b == state_c
        assert frames_a == frames_b == frames_c


def test_catalog_and_corpus_counts(catalog):
    with criterion("catalog-counts", 5.0):
        assert len(catalog.interactable_categories()) == 102
        assert catalog.get("Bread").num_variants == 30
        hist: dict[str, int] = {}
        for n in range(1, 121):
            hist_key = generate_scene(n, catalog).room_category
            hist[hist_key] = hist.get(hist_key, 0) + 1
        assert sum(hist.values()) == 120
        assert hist == {"kitchen": 30, "livingroom": 30, "bedroom": 30, "bathroom": 30}


def test_physics_properties(catalog):
    with criterion("physics", 5.0):
        cls = catalog.get("Book")
        assert cls.mass == 0.5 and cls.friction_coeff == 0.4

        # (a) impulse J = 2 Ns on 0.5 kg -> 4 m/s
        scene = make_room()
        book = add_object(scene, "Book", "Book_1", Vec3(3.0, 0.0, 1.5))
        apply_impulse(book, cls, 2.0, Vec3(0.0, 0.0, 1.0))
        assert abs(book.velocity.length() - 4.0) <= 1e-6

        # (b) friction stop distance v^2 / (2 mu g)
        start = book.position
        settle(scene, catalog)
        distance = (book.position - start).length()
        assert abs(distance - 4.0**2 / (2 * 0.4 * G)) <= 0.05

        # (c) drop from 1.0 m settles flush with the floor
        scene2 = make_room()
        dropped = add_object(scene2, "Book", "Book_2", Vec3(3.0, 1.0, 1.5))
        settle(scene2, catalog)
        assert abs(world_aabb(dropped, catalog).min.y) <= 1e-3

        # (d) energy never increases without impulses
        scene3 = make_room()
        mover = add_object(scene3, "Book", "Book_3", Vec3(3.0, 1.0, 1.5))
        mover.velocity = Vec3(0.0, 0.0, 3.0)

        def energy():
            v = mover.velocity.length()
            return cls.mass * G * mover.position.y + 0.5 * cls.mass * v * v

        prev = energy()
        for _ in range(150):
            integrate_step(scene3, catalog)
            now = energy()
            assert now <= prev + 1e-6
            prev = now


def test_spatial_oracle_equivalence():
    with criterion("bvh-oracle", 30.0):
        for scene_number in (17, 91):
            scene = generate_scene(scene_number)
            from hearth.catalog import default_catalog

            catalog = default_catalog()
            colliders = scene_colliders(scene, catalog)
            bvh = build_bvh(scene, catalog)
            rng = CounterRng("acceptance-bvh", scene_number)
            fb = scene.floor_bounds
            mismatches = 0
            for i in range(10_000):
                if i % 5 == 4:
                    # capsule sweep agreement: identical collider math both ways
                    agent = scene.agent
                    from hearth.geometry import yaw_forward

                    direction = yaw_forward(rng.choice((0, 90, 180, 270)))
                    length = 0.05 + rng.uniform() * 1.0
                    brute = capsule_free_distance(agent, direction.scaled(length), colliders)
                    pruned = capsule_free_distance(agent, direction.scaled(length), bvh.colliders)
                    mismatches += brute != pruned
                else:
                    origin = Vec3(
                        rng.uniform(fb.min.x, fb.max.x),
                        rng.uniform(0.05, 2.4),
                        rng.uniform(fb.min.z, fb.max.z),
                    )
                    d = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1))
                    if d.length() < 1e-9:
                        d = Vec3(0, 0, 1)
                    radius = 0.0 if rng.uniform() < 0.5 else rng.uniform(0.0, 0.08)
                    ray = Ray(origin, d.normalized(), rng.uniform(0.3, 6.0), radius)
                    mismatches += cast_colliders(ray, colliders) != bvh.cast(ray)
            assert mismatches == 0, f"scene {scene_number}: {mismatches} disagreements"


_EVENT_META_KEYS = {
    "sceneName", "screenWidth", "screenHeight", "lastAction", "lastActionSuccess",
    "errorCode", "errorMessage", "agent", "objects",
}
_OBJECT_META_KEYS = {
    "objectId", "objectType", "position", "rotationYaw", "distance", "visible",
    "interactable", "pickupable", "isPickedUp", "openable", "isOpen", "toggleable",
    "isToggled", "sliceable", "isSliced", "receptacle", "parentReceptacle",
    "receptacleObjectIds", "mass",
}


def _assert_event_schema(event) -> None:
    md = event.metadata
    assert set(md.keys()) == _EVENT_META_KEYS
    assert isinstance(md["lastActionSuccess"], bool)
    assert set(md["agent"].keys()) == {"position", "rotationYaw", "cameraHorizon", "heldObjectId"}
    for obj in md["objects"]:
        assert set(obj.keys()) == _OBJECT_META_KEYS
        assert not (obj["interactable"] and not obj["visible"])


class _Responder(http.server.BaseHTTPRequestHandler):
    script: list[bytes] = []
    received: list[float] = []
    delay = 0.0

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        self.rfile.read(length)
        type(self).received.append(time.perf_counter())
        if type(self).delay:
            time.sleep(type(self).delay)
        reply = (
            type(self).script.pop(0)
            if type(self).script
            else encode_action_request(ActionRequest(action="Stop"))
        )
        self.send_response(200)
        self.send_header("Content-Length", str(len(reply)))
        self.end_headers()
        self.wfile.write(reply)

    def log_message(self, *args):
        pass


def test_protocol_conformance():
    with criterion("protocol", 60.0):
        from fastapi.testclient import TestClient

        from hearth.server import create_app, run_push_loop

        client = TestClient(create_app())

        # pull mode: 100-step seeded walk, schema-valid events, 300x300 frames
        created = client.post("/sessions", json={"scene": 17})
        assert created.status_code == 201
        session_id = created.json()["session_id"]
        rng = CounterRng("acceptance-walk")
        verbs = ("MoveAhead", "MoveBack", "MoveLeft", "MoveRight", "RotateLeft", "RotateRight", "LookUp", "LookDown")
        for _ in range(100):
            response = client.post(
                f"/sessions/{session_id}/step", json={"action": rng.choice(verbs)}
            )
            assert response.status_code == 200
            event = decode_event(response.content)
            _assert_event_schema(event)
            assert len(event.frame.rgb) == 300 * 300 * 3 == 270000

        # push mode: scripted responder; exact count and blocking gaps
        server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Responder)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            _Responder.script = [
                encode_action_request(ActionRequest(action="RotateRight")) for _ in range(7)
            ] + [encode_action_request(ActionRequest(action="Stop"))]
            _Responder.received = []
            _Responder.delay = 0.1
            url = f"http://127.0.0.1:{server.server_address[1]}/"
            executed = run_push_loop(url, 17, init_params={"width": 64, "height": 64})
            assert executed == 7
            gaps = [b - a for a, b in zip(_Responder.received, _Responder.received[1:])]
            assert all(gap >= 0.099 for gap in gaps), gaps
        finally:
            server.shutdown()

        # session isolation: interleaving another session changes nothing
        actions = ["MoveAhead", "RotateRight", "MoveAhead", "LookDown", "MoveLeft"]
        solo_id = client.post("/sessions", json={"scene": 17}).json()["session_id"]
        solo = [client.post(f"/sessions/{solo_id}/step", json={"action": a}).content for a in actions]
        a_id = client.post("/sessions", json={"scene": 17}).json()["session_id"]
        b_id = client.post("/sessions", json={"scene": 99}).json()["session_id"]
        mixed = []
        for act in actions:
            mixed.append(client.post(f"/sessions/{a_id}/step", json={"action": act}).content)
            client.post(f"/sessions/{b_id}/step", json={"action": "MoveAhead"})
        assert solo == mixed


def test_benchmark_properties():
    with criterion("benchmark", 300.0):
        import psutil

        print()
        print("  reference context (original system, Xeon E5-2620 v4 + Titan X):")
        print("  ~70 actions/s at 1 worker and ~240 actions/s at 8 workers, 300x300")

        # resolution monotonicity, render mode
        rates = {}
        for res in (150, 300, 600):
            report = run_benchmark(1, 100, resolution=(res, res), mode=MODE_RENDER)
            rates[res] = report.actions_per_second
            print(f"  render {res}x{res}: {report.actions_per_second:.1f} actions/s")
        assert rates[150] > rates[300] > rates[600]

        # metadata-only rate dominates render rate
        meta = run_benchmark(1, 100, resolution=(300, 300), mode=MODE_METADATA)
        print(f"  metadata-only: {meta.actions_per_second:.1f} actions/s")
        assert meta.actions_per_second >= 10 * rates[300]

        # multi-worker scaling, conditional on physical cores
        physical = psutil.cpu_count(logical=False) or 1
        if physical >= 4:
            one = run_benchmark(1, 100, resolution=(300, 300), mode=MODE_RENDER, procs=True)
            eight = run_benchmark(8, 100, resolution=(300, 300), mode=MODE_RENDER, procs=True)
            print(
                f"  scaling: {one.actions_per_second:.1f} -> {eight.actions_per_second:.1f} actions/s"
            )
            assert eight.actions_per_second >= 2.5 * one.actions_per_second
        else:
            print(
                f"  scaling subtest skipped: criterion requires >= 4 physical cores, "
                f"this machine has {physical}"
            )
