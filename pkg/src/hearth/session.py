"""One simulation session: scene, config, collider index, step pipeline.

A session is a strictly single-threaded state machine; callers serialize
steps. Each step dispatches the action, rebuilds the collider index when
geometry changed, recomputes visibility, optionally renders, and packages
the event.
"""

from __future__ import annotations

import hashlib

from .actions import ActionOutcome, ActionRequest, SessionConfig, step as run_action
from .camera import camera_for_agent
from .errors import OutOfRangeError
from .events import Event, build_event
from .render import render_frame
from .scenegen import generate_scene, randomize_objects
from .sceneio import serialize_scene
from .spatial import build_bvh
from .visibility import full_visibility


class Session:
    def __init__(
        self,
        scene_number: int,
        grid_size: float | None = None,
        visibility_distance: float | None = None,
        width: int | None = None,
        height: int | None = None,
        render_depth: bool = False,
        render_instance_ids: bool = False,
        seed: int | None = None,
        catalog=None,
    ):
        if catalog is None:
            from .catalog import default_catalog

            catalog = default_catalog()
        self.catalog = catalog
        self.config = SessionConfig(render_depth=render_depth, render_instance_ids=render_instance_ids)
        if grid_size is not None:
            if not 0.05 <= grid_size <= 1.0:
                raise OutOfRangeError("gridSize must be in [0.05, 1.0]")
            self.config.grid_size = grid_size
        if visibility_distance is not None:
            if visibility_distance <= 0:
                raise OutOfRangeError("visibilityDistance must be positive")
            self.config.visibility_distance = visibility_distance
        if width is not None or height is not None:
            w = width if width is not None else self.config.width
            h = height if height is not None else self.config.height
            if w < 64 or h < 64:
                raise OutOfRangeError("resolution must be at least 64x64")
            self.config.width = w
            self.config.height = h
        self.scene = generate_scene(scene_number, catalog)
        if seed is not None:
            self.scene = randomize_objects(self.scene, seed, catalog)
        self.bvh = build_bvh(self.scene, catalog)
        self.last_action = "Initialize"
        self.last_outcome = ActionOutcome.ok()

    def _camera(self):
        return camera_for_agent(self.scene.agent, self.config.width, self.config.height)

    def current_event(self, render: bool = True, render_workers: int = 1) -> Event:
        report = full_visibility(
            self.scene,
            self._camera(),
            self.config.visibility_distance,
            self.catalog,
            self.bvh,
        )
        frame = None
        if render:
            frame = render_frame(
                self.scene,
                self._camera(),
                self.catalog,
                render_depth=self.config.render_depth,
                render_instance_ids=self.config.render_instance_ids,
                workers=render_workers,
            )
        return build_event(
            self.scene, self.config, self.last_outcome, self.last_action, report, frame, self.catalog
        )

    def step(self, req: ActionRequest, render: bool = True, render_workers: int = 1) -> Event:
        outcome, colliders_changed = run_action(
            self.scene, self.config, req, self.catalog, self.bvh
        )
        if colliders_changed:
            self.bvh = build_bvh(self.scene, self.catalog)
        self.last_action = req.action
        self.last_outcome = outcome
        return self.current_event(render=render, render_workers=render_workers)

    def state_bytes(self) -> bytes:
        return serialize_scene(self.scene, self.catalog)

    def state_hash(self) -> str:
        return hashlib.sha256(self.state_bytes()).hexdigest()
