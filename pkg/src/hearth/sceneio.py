"""Canonical on-disk scene format.

The format is UTF-8 JSON with a fixed key order and one object record per
block, floats written in shortest round-trip form. Serialization is byte
stable: the same scene always produces the same bytes, and single-field
state changes touch single lines (golden files diff cleanly).
"""

from __future__ import annotations

import json

from .errors import ParseError, ValidationError
from .geometry import Aabb, Vec3
from .scene import AgentState, ObjectInstance, Scene, validate_scene


def _fnum(v: float) -> str:
    out = repr(float(v))
    return out


def _fvec(v: Vec3) -> str:
    return f"[{_fnum(v.x)}, {_fnum(v.y)}, {_fnum(v.z)}]"


def _fbox(b: Aabb) -> str:
    return f'{{"min": {_fvec(b.min)}, "max": {_fvec(b.max)}}}'


def _fstr(s: str | None) -> str:
    return json.dumps(s)


def _fbool(b: bool) -> str:
    return "true" if b else "false"


def _instance_lines(inst: ObjectInstance, indent: str) -> list[str]:
    contained = ", ".join(_fstr(c) for c in inst.contained_ids)
    return [
        f'{indent}  "id": {_fstr(inst.object_id)},',
        f'{indent}  "category": {_fstr(inst.category)},',
        f'{indent}  "variant": {inst.variant_index},',
        f'{indent}  "position": {_fvec(inst.position)},',
        f'{indent}  "rotation_yaw": {inst.rotation_yaw},',
        f'{indent}  "is_open": {_fbool(inst.is_open)},',
        f'{indent}  "is_toggled": {_fbool(inst.is_toggled)},',
        f'{indent}  "is_sliced": {_fbool(inst.is_sliced)},',
        f'{indent}  "is_picked_up": {_fbool(inst.is_picked_up)},',
        f'{indent}  "parent_receptacle": {_fstr(inst.parent_receptacle)},',
        f'{indent}  "contained_ids": [{contained}],',
        f'{indent}  "velocity": {_fvec(inst.velocity)}',
    ]


def _instance_list(instances: list[ObjectInstance], indent: str) -> list[str]:
    lines = []
    for i, inst in enumerate(instances):
        lines.append(f"{indent}{{")
        lines.extend(_instance_lines(inst, indent))
        lines.append(f"{indent}}}" + ("," if i < len(instances) - 1 else ""))
    return lines


def scene_to_text(scene: Scene) -> str:
    lines = ["{"]
    lines.append(f'  "scene_number": {scene.scene_number},')
    lines.append(f'  "room_category": {_fstr(scene.room_category)},')
    lines.append(f'  "floor_bounds": {_fbox(scene.floor_bounds)},')
    if scene.walls:
        lines.append('  "walls": [')
        for i, w in enumerate(scene.walls):
            lines.append(f"    {_fbox(w)}" + ("," if i < len(scene.walls) - 1 else ""))
        lines.append("  ],")
    else:
        lines.append('  "walls": [],')
    for key, instances in (("objects", scene.objects), ("props", scene.props)):
        if instances:
            lines.append(f'  "{key}": [')
            lines.extend(_instance_list(instances, "    "))
            lines.append("  ],")
        else:
            lines.append(f'  "{key}": [],')
    a = scene.agent
    lines.append('  "agent": {')
    lines.append(f'    "agent_id": {a.agent_id},')
    lines.append(f'    "position": {_fvec(a.position)},')
    lines.append(f'    "rotation_yaw": {a.rotation_yaw},')
    lines.append(f'    "camera_horizon": {a.camera_horizon},')
    lines.append(f'    "held_object_id": {_fstr(a.held_object_id)}')
    lines.append("  },")
    lines.append(f'  "seed": {scene.seed}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _parse_vec(v, path: str) -> Vec3:
    if not isinstance(v, list) or len(v) != 3:
        raise ParseError(f"{path}: expected [x, y, z]")
    try:
        return Vec3(float(v[0]), float(v[1]), float(v[2]))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def _parse_box(d, path: str) -> Aabb:
    if not isinstance(d, dict) or "min" not in d or "max" not in d:
        raise ParseError(f"{path}: expected {{min, max}}")
    return Aabb(_parse_vec(d["min"], f"{path}.min"), _parse_vec(d["max"], f"{path}.max"))


def _parse_instance(d, path: str) -> ObjectInstance:
    if not isinstance(d, dict):
        raise ParseError(f"{path}: expected object record")
    try:
        contained = d.get("contained_ids", [])
        if not isinstance(contained, list) or not all(isinstance(c, str) for c in contained):
            raise ParseError(f"{path}.contained_ids: expected list of ids")
        parent = d.get("parent_receptacle")
        if parent is not None and not isinstance(parent, str):
            raise ParseError(f"{path}.parent_receptacle: expected id or null")
        return ObjectInstance(
            object_id=str(d["id"]),
            category=str(d["category"]),
            variant_index=int(d.get("variant", 0)),
            position=_parse_vec(d["position"], f"{path}.position"),
            rotation_yaw=int(d.get("rotation_yaw", 0)),
            is_open=bool(d.get("is_open", False)),
            is_toggled=bool(d.get("is_toggled", False)),
            is_sliced=bool(d.get("is_sliced", False)),
            is_picked_up=bool(d.get("is_picked_up", False)),
            parent_receptacle=parent,
            contained_ids=list(contained),
            velocity=_parse_vec(d.get("velocity", [0.0, 0.0, 0.0]), f"{path}.velocity"),
        )
    except KeyError as exc:
        raise ParseError(f"{path}: missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def scene_from_text(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not well-formed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    try:
        agent_d = data["agent"]
        agent = AgentState(
            agent_id=int(agent_d.get("agent_id", 0)),
            position=_parse_vec(agent_d["position"], "agent.position"),
            rotation_yaw=int(agent_d.get("rotation_yaw", 0)),
            camera_horizon=int(agent_d.get("camera_horizon", 0)),
            held_object_id=agent_d.get("held_object_id"),
        )
        return Scene(
            scene_number=int(data["scene_number"]),
            room_category=str(data["room_category"]),
            floor_bounds=_parse_box(data["floor_bounds"], "floor_bounds"),
            walls=[_parse_box(w, f"walls[{i}]") for i, w in enumerate(data.get("walls", []))],
            objects=[_parse_instance(o, f"objects[{i}]") for i, o in enumerate(data.get("objects", []))],
            props=[_parse_instance(p, f"props[{i}]") for i, p in enumerate(data.get("props", []))],
            agent=agent,
            seed=int(data.get("seed", 0)),
        )
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def load_scene(data: bytes | str, catalog=None) -> Scene:
    """Parse and validate a scene file. ParseError for malformed text,
    ValidationError (with field paths) for invariant violations."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    scene = scene_from_text(text)
    violations = validate_scene(scene, catalog)
    if violations:
        raise ValidationError(violations)
    return scene


def serialize_scene(scene: Scene, catalog=None) -> bytes:
    """Canonical bytes for a valid scene; raises ValidationError otherwise."""
    violations = validate_scene(scene, catalog)
    if violations:
        raise ValidationError(violations)
    return scene_to_text(scene).encode("utf-8")
