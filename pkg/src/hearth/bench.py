"""Actions-per-second benchmark harness.

Spawns N independent sessions (threads by default, or one OS process per
worker) that all execute the same seeded action script: a navigation-heavy
mix of 70% moves/rotates and 30% object interactions. The work is fully
deterministic - final state hashes match across runs and workers - so only
the timings vary. Reference context from the original system: roughly 70
actions/s single-threaded and 240 actions/s with 8 workers at 300x300 on
a Xeon E5-2620 v4 with a Titan X; those numbers are hardware-bound and are
not reproduction targets here.
"""

from __future__ import annotations

import multiprocessing
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .actions import (
    APPLY_FORCE,
    CLOSE_OBJECT,
    LOOK_DOWN,
    LOOK_UP,
    MOVE_AHEAD,
    MOVE_BACK,
    MOVE_LEFT,
    MOVE_RIGHT,
    OPEN_OBJECT,
    PICKUP_OBJECT,
    PUT_OBJECT,
    ROTATE_LEFT,
    ROTATE_RIGHT,
    TOGGLE_OFF,
    TOGGLE_ON,
    ActionRequest,
)
from .events import encode_event
from .geometry import Vec3
from .rng import CounterRng
from .scenegen import generate_scene
from .session import Session

MODE_RENDER = "render"
MODE_METADATA = "metadata_only"

DEFAULT_BENCH_SCENE = 17
_SCRIPT_SEED = 1234

_NAV_ACTIONS = (
    MOVE_AHEAD, MOVE_AHEAD, MOVE_AHEAD, MOVE_BACK, MOVE_LEFT, MOVE_RIGHT,
    ROTATE_LEFT, ROTATE_RIGHT, LOOK_UP, LOOK_DOWN,
)


@dataclass(frozen=True, slots=True)
class BenchReport:
    mode: str
    workers: int
    width: int
    height: int
    steps_per_worker: int
    wall_seconds: float
    actions_per_second: float
    per_worker_rates: tuple[float, ...]
    state_hashes: tuple[str, ...]

    def csv_row(self) -> str:
        return (
            f"{self.mode},{self.workers},{self.width},{self.height},"
            f"{self.steps_per_worker},{self.wall_seconds:.4f},{self.actions_per_second:.2f}"
        )

    def summary(self) -> str:
        return (
            f"mode={self.mode} workers={self.workers} res={self.width}x{self.height} "
            f"steps/worker={self.steps_per_worker} wall={self.wall_seconds:.2f}s "
            f"aggregate={self.actions_per_second:.1f} actions/s"
        )


CSV_HEADER = "mode,workers,width,height,steps,wall_s,aps"


def build_action_script(scene_number: int, steps: int, seed: int = _SCRIPT_SEED) -> list[ActionRequest]:
    """Deterministic 70/30 navigation/interaction mix for one scene."""
    scene = generate_scene(scene_number)
    catalog = None
    from .catalog import default_catalog

    catalog = default_catalog()
    openable = sorted(o.object_id for o in scene.objects if catalog.get(o.category).openable)
    toggleable = sorted(o.object_id for o in scene.objects if catalog.get(o.category).toggleable)
    pickupable = sorted(o.object_id for o in scene.objects if catalog.get(o.category).pickupable)
    receptacles = sorted(o.object_id for o in scene.objects if catalog.get(o.category).receptacle)
    movable = sorted(o.object_id for o in scene.objects if catalog.get(o.category).movable)
    rng = CounterRng("bench-script", scene_number, seed)
    script: list[ActionRequest] = []
    for _ in range(steps):
        roll = rng.uniform()
        if roll < 0.7 or not pickupable:
            script.append(ActionRequest(action=rng.choice(_NAV_ACTIONS)))
            continue
        kind = rng.randint(0, 5)
        if kind == 0 and openable:
            script.append(ActionRequest(action=OPEN_OBJECT, object_id=rng.choice(openable)))
        elif kind == 1 and openable:
            script.append(ActionRequest(action=CLOSE_OBJECT, object_id=rng.choice(openable)))
        elif kind == 2 and toggleable:
            verb = TOGGLE_ON if rng.randint(0, 1) else TOGGLE_OFF
            script.append(ActionRequest(action=verb, object_id=rng.choice(toggleable)))
        elif kind == 3:
            script.append(ActionRequest(action=PICKUP_OBJECT, object_id=rng.choice(pickupable)))
        elif kind == 4 and receptacles:
            script.append(ActionRequest(action=PUT_OBJECT, receptacle_id=rng.choice(receptacles)))
        else:
            script.append(
                ActionRequest(
                    action=APPLY_FORCE,
                    object_id=rng.choice(movable),
                    magnitude=1.0 + rng.uniform(),
                    direction=Vec3(1.0, 0.0, 0.0),
                )
            )
    return script


def _run_worker(args) -> tuple[float, str]:
    scene_number, steps, width, height, mode = args
    session = Session(scene_number=scene_number, width=width, height=height)
    script = build_action_script(scene_number, steps)
    render = mode == MODE_RENDER
    start = time.perf_counter()
    for req in script:
        event = session.step(req, render=render)
        encode_event(event)
    elapsed = time.perf_counter() - start
    return elapsed, session.state_hash()


def run_benchmark(
    workers: int,
    steps: int,
    resolution: tuple[int, int] = (300, 300),
    mode: str = MODE_RENDER,
    procs: bool = False,
    scene_number: int = DEFAULT_BENCH_SCENE,
) -> BenchReport:
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if steps < 100:
        raise ValueError("steps must be >= 100")
    if mode not in (MODE_RENDER, MODE_METADATA):
        raise ValueError(f"unknown mode {mode!r}")
    width, height = resolution
    args = [(scene_number, steps, width, height, mode)] * workers
    start = time.perf_counter()
    if procs and workers > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=workers) as pool:
            results = pool.map(_run_worker, args)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_worker, args))
    wall = time.perf_counter() - start
    per_worker = tuple(steps / elapsed for elapsed, _ in results)
    hashes = tuple(h for _, h in results)
    return BenchReport(
        mode=mode,
        workers=workers,
        width=width,
        height=height,
        steps_per_worker=steps,
        wall_seconds=wall,
        actions_per_second=(workers * steps) / wall,
        per_worker_rates=per_worker,
        state_hashes=hashes,
    )
