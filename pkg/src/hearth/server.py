"""Wire modes.

Pull mode: a conventional HTTP service. Clients create sessions, post
actions, and receive encoded events. Action failures ride in-band (200 +
lastActionSuccess=false); transport problems use HTTP status codes.

Push mode: the inverted control flow. The engine posts each event to the
client's endpoint and blocks until the response body supplies the next
action; the loop ends on Stop or response timeout.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading

import requests as _requests
from fastapi import FastAPI, Request, Response

from .actions import STOP, RequestSchemaError, parse_action_request
from .errors import DecodeError, OutOfRangeError
from .events import decode_action_request, encode_event, encode_metadata_only
from .session import Session

logger = logging.getLogger("hearth.server")

PUSH_TIMEOUT_S = 30.0

_INIT_KEYS = {
    "scene": int,
    "gridSize": (int, float),
    "visibilityDistance": (int, float),
    "width": int,
    "height": int,
    "renderDepth": bool,
    "renderInstanceIds": bool,
    "seed": int,
}


class _SessionSlot:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()


def create_app(max_sessions: int = 32) -> FastAPI:
    app = FastAPI(title="hearth", docs_url=None, redoc_url=None)
    slots: dict[str, _SessionSlot] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    def error(status: int, message: str) -> Response:
        return Response(
            content=json.dumps({"error": message}),
            status_code=status,
            media_type="application/json",
        )

    @app.post("/sessions")
    async def create_session(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return error(400, "body must be a JSON object")
        if not isinstance(body, dict) or "scene" not in body:
            return error(400, "missing required field: scene")
        for key, expected in _INIT_KEYS.items():
            if key in body and body[key] is not None:
                if isinstance(body[key], bool) and expected is not bool:
                    return error(400, f"{key} has wrong type")
                if not isinstance(body[key], expected):
                    return error(400, f"{key} has wrong type")
        with registry_lock:
            if len(slots) >= max_sessions:
                return error(503, "session limit reached")
        try:
            session = Session(
                scene_number=body["scene"],
                grid_size=body.get("gridSize"),
                visibility_distance=body.get("visibilityDistance"),
                width=body.get("width"),
                height=body.get("height"),
                render_depth=bool(body.get("renderDepth", False)),
                render_instance_ids=bool(body.get("renderInstanceIds", False)),
                seed=body.get("seed"),
            )
        except OutOfRangeError as exc:
            return error(400, f"OutOfRange: {exc}")
        with registry_lock:
            session_id = f"session-{next(counter)}"
            slots[session_id] = _SessionSlot(session)
        event_bytes = encode_event(session.current_event())
        payload = b'{"session_id":"' + session_id.encode() + b'","event":' + event_bytes + b"}"
        return Response(content=payload, status_code=201, media_type="application/json")

    @app.post("/sessions/{session_id}/step")
    async def step_session(session_id: str, request: Request) -> Response:
        slot = slots.get(session_id)
        if slot is None:
            return error(404, f"unknown session {session_id}")
        try:
            body = await request.json()
        except Exception:
            return error(400, "body must be a JSON object")
        try:
            req = parse_action_request(body)
        except RequestSchemaError as exc:
            return error(400, f"schema error: {exc}")
        if not slot.lock.acquire(blocking=False):
            return error(409, "a step is already in flight for this session")
        try:
            event = slot.session.step(req)
            return Response(content=encode_event(event), media_type="application/json")
        finally:
            slot.lock.release()

    @app.get("/sessions/{session_id}/metadata")
    async def session_metadata(session_id: str) -> Response:
        slot = slots.get(session_id)
        if slot is None:
            return error(404, f"unknown session {session_id}")
        if not slot.lock.acquire(blocking=False):
            return error(409, "a step is already in flight for this session")
        try:
            event = slot.session.current_event(render=False)
            return Response(content=encode_metadata_only(event.metadata), media_type="application/json")
        finally:
            slot.lock.release()

    @app.delete("/sessions/{session_id}")
    async def delete_session(session_id: str) -> Response:
        with registry_lock:
            if session_id not in slots:
                return error(404, f"unknown session {session_id}")
            del slots[session_id]
        return Response(status_code=204)

    return app


def serve_pull(port: int, max_sessions: int = 32, host: str = "127.0.0.1") -> None:
    """Run the pull-mode service (blocking)."""
    import uvicorn

    uvicorn.run(create_app(max_sessions), host=host, port=port, log_level="warning")


def run_push_loop(
    push_url: str,
    scene_number: int,
    init_params: dict | None = None,
    timeout: float = PUSH_TIMEOUT_S,
    http_post=None,
) -> int:
    """Drive the blocking event loop against a client endpoint.

    Posts the encoded event, waits for the response body to carry the next
    encoded ActionRequest, executes it, repeats. Returns the number of
    executed actions when the client answers Stop or the response times
    out. A malformed response aborts with DecodeError (the ``executed``
    attribute carries the count).
    """
    params = dict(init_params or {})
    session = Session(scene_number=scene_number, **params)
    post = http_post or (lambda url, data, t: _requests.post(
        url, data=data, headers={"Content-Type": "application/json"}, timeout=t
    ))
    executed = 0
    event = session.current_event()
    while True:
        try:
            response = post(push_url, encode_event(event), timeout)
        except _requests.exceptions.Timeout:
            logger.warning("push loop: response timed out after %.0f s at step %d", timeout, executed)
            return executed
        body = response.content if hasattr(response, "content") else response
        try:
            req = decode_action_request(body)
        except DecodeError as exc:
            exc.executed = executed
            logger.error("push loop: bad response body at step %d: %s", executed, exc)
            raise
        if req.action == STOP:
            return executed
        event = session.step(req)
        executed += 1
