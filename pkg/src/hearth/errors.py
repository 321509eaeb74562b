"""Exception types and the violation record shared across the simulator."""

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Violation:
    """One invariant breach: machine-readable code plus the field path."""

    code: str
    path: str
    message: str = ""


class HearthError(Exception):
    """Base class for all simulator errors."""


class ParseError(HearthError):
    """Raised when a scene or event body is not well-formed text."""


class ValidationError(HearthError):
    """Raised when data violates a model invariant.

    Carries the machine-readable violations so callers can report paths.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{v.code} at {v.path}: {v.message}" for v in self.violations)
        super().__init__(msg or "validation failed")


class DecodeError(HearthError):
    """Raised when a wire body cannot be decoded."""


class OutOfRangeError(HearthError):
    """Raised when a scalar parameter falls outside its documented range."""


class UnknownCategoryError(HearthError):
    """Raised when an object category is not present in the catalog."""


class PlacementFailure(HearthError):
    """Raised when object randomization cannot place every pickupable.

    ``scene`` is the untouched input scene; ``report`` lists the object ids
    that fit nowhere.
    """

    def __init__(self, scene, report):
        self.scene = scene
        self.report = list(report)
        super().__init__(f"no placement found for: {', '.join(self.report)}")
