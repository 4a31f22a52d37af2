"""Light cue channels: environment light, point light, spotlight.

Each channel maps the running angular deviation through normalized_progress
and interpolates its engine parameter between a configured min and max.
The point light serves out-of-view guidance, the spotlight within-view;
the viewport test gates which one is active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .geometry import (
    AngularRange,
    Pose,
    Side,
    Vec3,
    angular_deviation,
    direction_to,
    in_viewport,
    lateral_side,
    normalized_progress,
)


@dataclass(frozen=True)
class LightLevels:
    """Intensity band in engine-light units."""

    l_min: float
    l_max: float

    def __post_init__(self) -> None:
        if self.l_min < 0.0 or self.l_min >= self.l_max:
            raise ConfigError(
                f"light levels require 0 <= l_min < l_max, got [{self.l_min}, {self.l_max}]"
            )


@dataclass(frozen=True)
class ColorRGB:
    r: float
    g: float
    b: float

    def __post_init__(self) -> None:
        for name, v in (("r", self.r), ("g", self.g), ("b", self.b)):
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"color channel {name}={v} must lie in [0, 1]")

    def to_tuple(self) -> tuple[float, float, float]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class SpotlightGeometry:
    """Cone angle band, degrees."""

    a_min: float
    a_max: float

    def __post_init__(self) -> None:
        if not 0.0 < self.a_min < self.a_max <= 180.0:
            raise ConfigError(
                f"spotlight cone requires 0 < a_min < a_max <= 180, got [{self.a_min}, {self.a_max}]"
            )


@dataclass(frozen=True)
class PointLightState:
    active: bool
    side: Side
    position: Vec3
    color: ColorRGB


@dataclass(frozen=True)
class SpotlightState:
    active: bool
    intensity: float
    cone_angle: float
    aim: Vec3


def env_light_intensity(
    theta: float, rng: AngularRange, levels: LightLevels, gamma: float
) -> float:
    """Environment brightness at deviation theta."""
    p = normalized_progress(theta, rng, gamma)
    return levels.l_min + (levels.l_max - levels.l_min) * p


def env_light_with_fade(
    t_since_signal: float,
    theta: float,
    original: float,
    rng: AngularRange,
    levels: LightLevels,
    gamma: float,
    fade_duration: float = 2.0,
) -> float:
    """Environment brightness during the on-signal fade.

    Linear blend from the pre-signal brightness toward the modulated value;
    after fade_duration the modulated value applies exactly.
    """
    if fade_duration <= 0.0:
        raise ConfigError(f"fade_duration={fade_duration} must be > 0")
    if t_since_signal < 0.0:
        raise ConfigError(f"t_since_signal={t_since_signal} must be >= 0")
    target = env_light_intensity(theta, rng, levels, gamma)
    blend = min(t_since_signal / fade_duration, 1.0)
    return original + (target - original) * blend


def spot_intensity(
    theta: float, rng: AngularRange, levels: LightLevels, gamma: float
) -> float:
    """Spotlight brightness at deviation theta; same form as the env light."""
    p = normalized_progress(theta, rng, gamma)
    return levels.l_min + (levels.l_max - levels.l_min) * p


def spot_cone_angle(
    theta: float, rng: AngularRange, geometry: SpotlightGeometry, gamma: float
) -> float:
    """Spotlight cone width at deviation theta."""
    p = normalized_progress(theta, rng, gamma)
    return geometry.a_min + (geometry.a_max - geometry.a_min) * p


def point_light_color(
    theta: float,
    rng: AngularRange,
    warm: ColorRGB,
    cold: ColorRGB,
    gamma: float,
) -> ColorRGB:
    """Point-light color: cold at theta_min, warm at theta_max."""
    p = normalized_progress(theta, rng, gamma)

    def chan(w: float, c: float) -> float:
        return max(0.0, min(1.0, c + (w - c) * p))

    return ColorRGB(chan(warm.r, cold.r), chan(warm.g, cold.g), chan(warm.b, cold.b))


def _rotate_horizontal(forward: Vec3, azimuth_deg: float, side: Side) -> Vec3:
    """Unit direction: horizontal forward rotated azimuth_deg toward side."""
    flat = Vec3(forward.x, 0.0, forward.z)
    if flat.norm() <= 1e-12:
        # Head looking straight up/down: no horizontal heading; default +z.
        flat = Vec3(0.0, 0.0, 1.0)
    ahead = flat.normalized()
    right = Vec3(ahead.z, 0.0, -ahead.x)  # horizontal right of ahead
    lat = right if side is Side.RIGHT else right.scaled(-1.0)
    a = math.radians(azimuth_deg)
    return (ahead.scaled(math.cos(a)) + lat.scaled(math.sin(a))).normalized()


def point_light_state(
    pose: Pose,
    target: Vec3,
    rng: AngularRange,
    *,
    half_angle: float,
    azimuth: float,
    radius: float,
    warm: ColorRGB,
    cold: ColorRGB,
    gamma: float,
) -> PointLightState:
    """Head-affixed directional point light; active only out of viewport.

    Placed radius meters from the head at azimuth degrees off head forward,
    on the lateral side of the target; colored by the head-to-target angle.
    """
    side = lateral_side(pose, target)
    position = pose.position + _rotate_horizontal(pose.head_forward, azimuth, side).scaled(radius)
    theta = angular_deviation(pose.head_forward, direction_to(pose.position, target))
    color = point_light_color(theta, rng, warm, cold, gamma)
    active = not in_viewport(pose, target, half_angle)
    return PointLightState(active=active, side=side, position=position, color=color)


def spotlight_state(
    pose: Pose,
    target: Vec3,
    rng: AngularRange,
    levels: LightLevels,
    geometry: SpotlightGeometry,
    *,
    half_angle: float,
    gamma: float,
    deactivate_at_min: bool = True,
) -> SpotlightState:
    """Target-aimed spotlight; active only within the viewport.

    Intensity and cone angle both widen with the gaze-to-target angle.
    With deactivate_at_min the light switches off once the gaze has fully
    arrived (theta <= theta_min).
    """
    theta = angular_deviation(pose.gaze_forward, direction_to(pose.position, target))
    active = in_viewport(pose, target, half_angle)
    if active and deactivate_at_min and theta <= rng.theta_min:
        active = False
    if not active:
        return SpotlightState(active=False, intensity=0.0, cone_angle=geometry.a_min, aim=target)
    return SpotlightState(
        active=True,
        intensity=spot_intensity(theta, rng, levels, gamma),
        cone_angle=spot_cone_angle(theta, rng, geometry, gamma),
        aim=target,
    )
