"""Headless deterministic indoor-environment simulator."""

from .actions import ActionOutcome, ActionRequest, SessionConfig
from .catalog import ObjectClass, ObjectClassCatalog, default_catalog
from .errors import (
    DecodeError,
    HearthError,
    OutOfRangeError,
    ParseError,
    PlacementFailure,
    UnknownCategoryError,
    ValidationError,
    Violation,
)
from .geometry import Aabb, Vec3
from .scene import AgentState, ObjectInstance, Scene, validate_scene
from .sceneio import load_scene, serialize_scene
from .scenegen import generate_scene, randomize_objects, select_variant
from .session import Session

__version__ = "0.1.0"

__all__ = [
    "ActionOutcome",
    "ActionRequest",
    "AgentState",
    "Aabb",
    "DecodeError",
    "HearthError",
    "ObjectClass",
    "ObjectClassCatalog",
    "ObjectInstance",
    "OutOfRangeError",
    "ParseError",
    "PlacementFailure",
    "Scene",
    "Session",
    "SessionConfig",
    "UnknownCategoryError",
    "ValidationError",
    "Vec3",
    "Violation",
    "default_catalog",
    "generate_scene",
    "load_scene",
    "randomize_objects",
    "select_variant",
    "serialize_scene",
    "validate_scene",
]
