"""Step events: metadata snapshots plus encoded frame buffers.

Metadata covers the agent and every interactable-class instance (clutter
props are structurally excluded), ordered by object id, with canonical
JSON bytes so identical states encode identically. Frame buffers travel
base64: RGB24 rows top-first, optional little-endian float32 depth, and
optional int32 instance indices with a separate id table.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

import numpy as np

from .actions import ActionOutcome, ActionRequest, RequestSchemaError, parse_action_request, request_to_mapping
from .errors import DecodeError
from .render import FrameSet
from .scene import Scene
from .visibility import VisibilityReport


@dataclass(slots=True)
class Event:
    frame: FrameSet | None
    metadata: dict


def scene_name(scene_number: int) -> str:
    return f"scene_{scene_number:03d}"


def _object_meta(inst, cls, report: VisibilityReport) -> dict:
    entry = report.entries.get(inst.object_id)
    return {
        "objectId": inst.object_id,
        "objectType": inst.category,
        "position": inst.position.to_list(),
        "rotationYaw": inst.rotation_yaw,
        "distance": entry.distance if entry else None,
        "visible": entry.visible if entry else False,
        "interactable": entry.interactable if entry else False,
        "pickupable": cls.pickupable,
        "isPickedUp": inst.is_picked_up,
        "openable": cls.openable,
        "isOpen": inst.is_open,
        "toggleable": cls.toggleable,
        "isToggled": inst.is_toggled,
        "sliceable": cls.sliceable,
        "isSliced": inst.is_sliced,
        "receptacle": cls.receptacle,
        "parentReceptacle": inst.parent_receptacle,
        "receptacleObjectIds": sorted(inst.contained_ids),
        "mass": cls.mass,
    }


def build_metadata(
    scene: Scene,
    config,
    outcome: ActionOutcome,
    last_action: str,
    report: VisibilityReport,
    catalog=None,
) -> dict:
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    agent = scene.agent
    objects = [
        _object_meta(inst, catalog.get(inst.category), report)
        for inst in sorted(scene.objects, key=lambda o: o.object_id)
    ]
    return {
        "sceneName": scene_name(scene.scene_number),
        "screenWidth": config.width,
        "screenHeight": config.height,
        "lastAction": last_action,
        "lastActionSuccess": outcome.success,
        "errorCode": outcome.error_code,
        "errorMessage": outcome.error_message,
        "agent": {
            "position": agent.position.to_list(),
            "rotationYaw": agent.rotation_yaw,
            "cameraHorizon": agent.camera_horizon,
            "heldObjectId": agent.held_object_id,
        },
        "objects": objects,
    }


def build_event(
    scene: Scene,
    config,
    outcome: ActionOutcome,
    last_action: str,
    report: VisibilityReport,
    frame: FrameSet | None,
    catalog=None,
) -> Event:
    return Event(
        frame=frame,
        metadata=build_metadata(scene, config, outcome, last_action, report, catalog),
    )


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def encode_event(event: Event) -> bytes:
    """Canonical wire bytes: fixed key order, compact separators."""
    body: dict = {}
    frame = event.frame
    if frame is not None:
        body["frame_b64"] = _b64(frame.rgb)
        body["width"] = frame.width
        body["height"] = frame.height
        body["format"] = "RGB24"
        if frame.depth is not None:
            body["depth_b64"] = _b64(frame.depth.astype("<f4").tobytes())
        if frame.instance_ids is not None:
            body["ids_b64"] = _b64(frame.instance_ids.astype("<i4").tobytes())
            body["ids_table"] = list(frame.id_table or [])
    body["metadata"] = event.metadata
    return json.dumps(body, separators=(",", ":")).encode("utf-8")


def encode_metadata_only(metadata: dict) -> bytes:
    return json.dumps({"metadata": metadata}, separators=(",", ":")).encode("utf-8")


def decode_event(data: bytes | str) -> Event:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"event body is not valid JSON: {exc}") from None
    if not isinstance(body, dict) or "metadata" not in body:
        raise DecodeError("event body missing metadata")
    frame = None
    if "frame_b64" in body:
        try:
            rgb = base64.b64decode(body["frame_b64"], validate=True)
            width = int(body["width"])
            height = int(body["height"])
        except (KeyError, ValueError, TypeError) as exc:
            raise DecodeError(f"bad frame fields: {exc}") from None
        if body.get("format") != "RGB24":
            raise DecodeError(f"unknown frame format {body.get('format')!r}")
        if len(rgb) != width * height * 3:
            raise DecodeError(f"frame length {len(rgb)} != {width}*{height}*3")
        depth = None
        if "depth_b64" in body:
            raw = base64.b64decode(body["depth_b64"], validate=True)
            depth = np.frombuffer(raw, dtype="<f4").reshape(height, width)
        ids = None
        table = None
        if "ids_b64" in body:
            raw = base64.b64decode(body["ids_b64"], validate=True)
            ids = np.frombuffer(raw, dtype="<i4").reshape(height, width)
            table = list(body.get("ids_table", []))
        frame = FrameSet(
            width=width,
            height=height,
            rgb=rgb,
            depth=depth,
            instance_ids=ids,
            id_table=table,
        )
    elif any(k in body for k in ("width", "height", "depth_b64", "ids_b64")):
        raise DecodeError("frame fields present without frame_b64")
    return Event(frame=frame, metadata=body["metadata"])


def encode_action_request(req: ActionRequest) -> bytes:
    return json.dumps(request_to_mapping(req), separators=(",", ":")).encode("utf-8")


def decode_action_request(data: bytes | str) -> ActionRequest:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"action body is not valid JSON: {exc}") from None
    try:
        return parse_action_request(mapping)
    except RequestSchemaError as exc:
        raise DecodeError(str(exc)) from None
