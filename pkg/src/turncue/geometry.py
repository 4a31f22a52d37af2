"""Angular math shared by every cue channel.

All angles in this package are degrees (the thresholds and ranges the cue
formulas are quoted in), all positions are meters. The coordinate system is
y-up; the horizontal plane is x-z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError, DegenerateGeometryError, InvalidDirectionError

# Tolerance on |v| - 1 for direction-valued vectors.
UNIT_TOLERANCE = 1e-6

# Guard on inclusive angular comparisons so exact-boundary cases survive
# acos rounding.
_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class Vec3:
    """3-component vector: position (m) or unit direction."""

    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, s: float) -> "Vec3":
        return Vec3(self.x * s, self.y * s, self.z * s)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n <= 1e-12:
            raise DegenerateGeometryError("cannot normalize a zero-length vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def is_unit(self, tol: float = UNIT_TOLERANCE) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def to_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Pose:
    """User position plus head and gaze forward directions at a timestamp."""

    position: Vec3
    head_forward: Vec3
    gaze_forward: Vec3
    timestamp: float

    def __post_init__(self) -> None:
        if not self.head_forward.is_unit():
            raise InvalidDirectionError(
                f"head_forward has length {self.head_forward.norm():.8f}, expected 1"
            )
        if not self.gaze_forward.is_unit():
            raise InvalidDirectionError(
                f"gaze_forward has length {self.gaze_forward.norm():.8f}, expected 1"
            )


@dataclass(frozen=True)
class AngularRange:
    """[theta_min, theta_max] band over which a cue parameter modulates."""

    theta_min: float
    theta_max: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta_min <= 180.0:
            raise ConfigError(f"theta_min={self.theta_min} must lie in [0, 180]")
        if not 0.0 <= self.theta_max <= 180.0:
            raise ConfigError(f"theta_max={self.theta_max} must lie in [0, 180]")
        if self.theta_max <= self.theta_min:
            raise ConfigError(
                f"theta_max={self.theta_max} must exceed theta_min={self.theta_min}"
            )


class DeviationReference(Enum):
    """Which pair of directions a channel's running angle is measured between."""

    GAZE_AT_SIGNAL = "gaze_at_signal"
    HEAD_TO_TARGET = "head_to_target"
    GAZE_TO_TARGET = "gaze_to_target"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


def angular_deviation(a: Vec3, b: Vec3) -> float:
    """Unsigned angle between two unit directions, in degrees [0, 180].

    Raises InvalidDirectionError when either input is not unit-length
    within 1e-6.
    """
    for name, v in (("a", a), ("b", b)):
        if not v.is_unit():
            raise InvalidDirectionError(
                f"argument {name} has length {v.norm():.8f}, expected unit"
            )
    c = max(-1.0, min(1.0, a.dot(b)))
    return math.degrees(math.acos(c))


def direction_to(origin: Vec3, target: Vec3) -> Vec3:
    """Unit vector from origin to target; degenerate if they coincide."""
    d = target - origin
    if d.norm() <= 1e-12:
        raise DegenerateGeometryError("target coincides with origin")
    return d.normalized()


def deviation_to_target(
    pose: Pose,
    target: Vec3,
    ref: DeviationReference,
    signal_gaze: Vec3 | None = None,
) -> float:
    """Running angle for one cue channel, per its reference frame.

    GAZE_AT_SIGNAL measures current gaze against the gaze captured at the
    signal instant (signal_gaze required); the other two measure against the
    direction from the user to the target.
    """
    if ref is DeviationReference.GAZE_AT_SIGNAL:
        if signal_gaze is None:
            raise ConfigError("GAZE_AT_SIGNAL reference requires signal_gaze")
        return angular_deviation(pose.gaze_forward, signal_gaze)
    to_target = direction_to(pose.position, target)
    if ref is DeviationReference.HEAD_TO_TARGET:
        return angular_deviation(pose.head_forward, to_target)
    return angular_deviation(pose.gaze_forward, to_target)


def in_viewport(pose: Pose, target: Vec3, half_angle: float) -> bool:
    """True iff the target lies within half_angle of head forward (inclusive)."""
    if not 0.0 < half_angle < 180.0:
        raise ConfigError(f"viewport half_angle={half_angle} must lie in (0, 180)")
    dev = angular_deviation(pose.head_forward, direction_to(pose.position, target))
    return dev <= half_angle + _BOUNDARY_EPS


def lateral_side(pose: Pose, target: Vec3) -> Side:
    """Which side of head forward the target lies on, in the horizontal plane.

    Exactly-behind (and exactly-ahead) ties resolve to RIGHT so traces have
    a total order.
    """
    d = target - pose.position
    h = pose.head_forward
    # y-component of cross(up, head) dotted with the offset: right-handed
    # horizontal convention, head +z / target +x -> RIGHT.
    lateral = h.z * d.x - h.x * d.z
    return Side.LEFT if lateral < 0.0 else Side.RIGHT


def normalized_progress(theta: float, rng: AngularRange, gamma: float) -> float:
    """Clamped, normalized, curved progress of theta through rng.

    Returns ((clamp(theta) - theta_min) / (theta_max - theta_min)) ** gamma,
    exactly 0 at theta_min and 1 at theta_max, monotone non-decreasing in
    theta for any gamma > 0.
    """
    if gamma <= 0.0:
        raise ConfigError(f"gamma={gamma} must be > 0")
    clamped = min(rng.theta_max, max(theta, rng.theta_min))
    frac = (clamped - rng.theta_min) / (rng.theta_max - rng.theta_min)
    return frac**gamma
