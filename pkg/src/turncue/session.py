"""Per-signal guidance session: reference capture, per-tick cue math,
acknowledgment and miss detection.

A session is a value: begin_signal and tick return new states, so replaying
the same pose sequence reproduces the same frames bit for bit, and distinct
sessions never share anything.

State transitions: Idle -> Signaled -> (Acknowledged | Missed). A new signal
may begin from Idle or from a terminal state, never while one is in flight.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import audio
from .audio import DuckEnvelope, Role, SoundSourceState
from .config import GuidanceConfig
from .errors import ConcurrentSignalError, ConfigError, TraceOrderError
from .geometry import (
    AngularRange,
    DeviationReference,
    Pose,
    Vec3,
    angular_deviation,
    deviation_to_target,
    direction_to,
    in_viewport,
    lateral_side,
)
from .lights import (
    PointLightState,
    SpotlightState,
    env_light_with_fade,
    point_light_state,
    spotlight_state,
)

# Minimum captured range width, degrees: keeps the cue formulas well-defined
# when a signal arrives with the user already aligned.
MIN_RANGE_WIDTH = 1.0


@dataclass(frozen=True)
class Idle:
    pass


IDLE = Idle()


@dataclass(frozen=True)
class Signaled:
    signal_time: float
    signal_gaze: Vec3
    env_range: AngularRange
    spot_range: AngularRange
    head_range: AngularRange
    original_env: float
    role: Role
    target_in_view_at_signal: bool
    chimes: tuple[float, ...]
    dwell: float = 0.0
    alignment_start: float | None = None
    last_timestamp: float = 0.0


@dataclass(frozen=True)
class Acknowledged:
    response_time: float
    ack_time: float
    env_at_end: float
    original_env: float
    role: Role
    target_in_view_at_signal: bool


@dataclass(frozen=True)
class Missed:
    miss_time: float
    env_at_end: float
    original_env: float
    role: Role
    target_in_view_at_signal: bool


SessionState = Idle | Signaled | Acknowledged | Missed


@dataclass(frozen=True)
class CueFrame:
    """Per-tick composite handed to a renderer or trace writer."""

    timestamp: float
    env_intensity: float
    point: PointLightState
    spot: SpotlightState
    sound: SoundSourceState
    duck_gain: float
    session_state: str


def _state_tag(state: SessionState) -> str:
    if isinstance(state, Signaled):
        return "signaled"
    if isinstance(state, Acknowledged):
        return "acknowledged"
    if isinstance(state, Missed):
        return "missed"
    return "idle"


def begin_signal(
    state: SessionState,
    pose: Pose,
    target: Vec3,
    role: Role,
    config: GuidanceConfig,
    original_env: float | None = None,
) -> Signaled:
    """Capture reference frames and open a session for one new-speaker signal.

    theta_max per channel is the angle to the target at this instant,
    measured from the gaze for the gaze-referenced channels and from the
    head for the head-referenced ones, floored to a minimal positive range.
    """
    if isinstance(state, Signaled):
        raise ConcurrentSignalError(
            "a guidance session is already active; multi-signal queuing is unsupported"
        )
    gaze_theta = deviation_to_target(pose, target, DeviationReference.GAZE_TO_TARGET)
    head_theta = deviation_to_target(pose, target, DeviationReference.HEAD_TO_TARGET)
    floor = config.theta_min + MIN_RANGE_WIDTH
    gaze_range = AngularRange(config.theta_min, max(gaze_theta, floor))
    head_range = AngularRange(config.theta_min, max(head_theta, floor))

    repeats = max(1, round(config.chime_max_repeats * config.subtlety))
    interval = config.chime_repeat_interval if repeats > 1 else None
    chimes = tuple(audio.chime_schedule(pose.timestamp, interval, repeats))

    return Signaled(
        signal_time=pose.timestamp,
        signal_gaze=pose.gaze_forward,
        env_range=gaze_range,
        spot_range=gaze_range,
        head_range=head_range,
        original_env=config.env_levels.l_max if original_env is None else original_env,
        role=role,
        target_in_view_at_signal=in_viewport(pose, target, config.viewport_half_angle),
        chimes=chimes,
        dwell=0.0,
        alignment_start=None,
        last_timestamp=pose.timestamp,
    )


def _inactive_point(pose: Pose, target: Vec3 | None, config: GuidanceConfig) -> PointLightState:
    if target is None:
        return PointLightState(
            active=False,
            side=lateral_side(pose, pose.position + pose.head_forward),
            position=pose.position,
            color=config.cold,
        )
    state = point_light_state(
        pose,
        target,
        AngularRange(config.theta_min, config.theta_min + MIN_RANGE_WIDTH),
        half_angle=config.viewport_half_angle,
        azimuth=config.point_azimuth,
        radius=config.point_radius,
        warm=config.warm,
        cold=config.cold,
        gamma=config.gamma_point,
    )
    return replace(state, active=False, color=config.cold)


def _quiet_frame(
    pose: Pose,
    target: Vec3 | None,
    config: GuidanceConfig,
    env: float,
    tag: str,
) -> CueFrame:
    """Frame with every cue off: idle sessions and terminal states."""
    aim = target if target is not None else pose.position
    return CueFrame(
        timestamp=pose.timestamp,
        env_intensity=env,
        point=_inactive_point(pose, target, config),
        spot=SpotlightState(
            active=False, intensity=0.0, cone_angle=config.spot_geometry.a_min, aim=aim
        ),
        sound=SoundSourceState(position=aim, chime_active=False),
        duck_gain=1.0,
        session_state=tag,
    )


def _restored_env(env_at_end: float, original: float, elapsed: float, fade: float) -> float:
    blend = min(max(elapsed, 0.0) / fade, 1.0)
    return env_at_end + (original - env_at_end) * blend


def tick(
    state: SessionState,
    pose: Pose,
    target: Vec3 | None,
    dt: float,
    config: GuidanceConfig,
) -> tuple[SessionState, CueFrame]:
    """Advance a session by one frame and compute all cue outputs.

    Contiguous gaze dwell of ack_dwell seconds within ack_threshold of the
    target acknowledges the signal; miss_timeout seconds without it misses.
    After either terminal the cues deactivate and the environment light
    returns to its pre-signal value over the fade profile.
    """
    if dt <= 0.0:
        raise ConfigError(f"dt={dt} must be > 0")

    if isinstance(state, Idle):
        return state, _quiet_frame(pose, target, config, config.env_levels.l_max, "idle")

    if isinstance(state, (Acknowledged, Missed)):
        end_time = state.ack_time if isinstance(state, Acknowledged) else state.miss_time
        env = _restored_env(
            state.env_at_end, state.original_env, pose.timestamp - end_time, config.fade_duration
        )
        return state, _quiet_frame(pose, target, config, env, _state_tag(state))

    # Signaled
    if target is None:
        raise ConfigError("an active session requires a target position")
    if pose.timestamp < state.last_timestamp:
        raise TraceOrderError(
            f"pose timestamp {pose.timestamp} precedes {state.last_timestamp}"
        )
    ts = pose.timestamp
    elapsed = ts - state.signal_time

    env_theta = angular_deviation(pose.gaze_forward, state.signal_gaze)
    env = env_light_with_fade(
        elapsed,
        env_theta,
        state.original_env,
        state.env_range,
        config.env_levels,
        config.gamma_env,
        config.fade_duration,
    )

    point = point_light_state(
        pose,
        target,
        state.head_range,
        half_angle=config.viewport_half_angle,
        azimuth=config.point_azimuth,
        radius=config.point_radius,
        warm=config.warm,
        cold=config.cold,
        gamma=config.gamma_point,
    )
    spot = spotlight_state(
        pose,
        target,
        state.spot_range,
        config.spot_levels,
        config.spot_geometry,
        half_angle=config.viewport_half_angle,
        gamma=config.gamma_spot,
        deactivate_at_min=config.spot_deactivate_at_min,
    )

    head_theta = angular_deviation(pose.head_forward, direction_to(pose.position, target))
    sound_pos = audio.sound_source_position(
        pose.position, target, head_theta, state.head_range, config.sound_easing
    )
    chime_active = any(c <= ts < c + config.duck_duration for c in state.chimes)

    effective_gain = audio.scaled_duck_gain(config.duck_gain, config.subtlety)
    gain = 1.0
    for c in state.chimes:
        env_duck = DuckEnvelope(c, config.duck_duration, effective_gain)
        gain = min(gain, audio.duck_gain(ts, env_duck, state.role))

    gaze_dev = deviation_to_target(pose, target, DeviationReference.GAZE_TO_TARGET)
    if gaze_dev <= config.ack_threshold:
        alignment_start = state.alignment_start if state.alignment_start is not None else ts
        dwell = state.dwell + dt
    else:
        alignment_start = None
        dwell = 0.0

    if dwell >= config.ack_dwell and alignment_start is not None:
        ack = Acknowledged(
            response_time=alignment_start - state.signal_time,
            ack_time=ts,
            env_at_end=env,
            original_env=state.original_env,
            role=state.role,
            target_in_view_at_signal=state.target_in_view_at_signal,
        )
        return ack, _quiet_frame(pose, target, config, env, "acknowledged")

    if elapsed >= config.miss_timeout:
        miss = Missed(
            miss_time=ts,
            env_at_end=env,
            original_env=state.original_env,
            role=state.role,
            target_in_view_at_signal=state.target_in_view_at_signal,
        )
        return miss, _quiet_frame(pose, target, config, env, "missed")

    new_state = replace(
        state, dwell=dwell, alignment_start=alignment_start, last_timestamp=ts
    )
    frame = CueFrame(
        timestamp=ts,
        env_intensity=env,
        point=point,
        spot=spot,
        sound=SoundSourceState(position=sound_pos, chime_active=chime_active),
        duck_gain=gain,
        session_state="signaled",
    )
    return new_state, frame


def response_time(state: SessionState) -> float | None:
    """Seconds from signal to alignment onset; only defined once acknowledged."""
    if isinstance(state, Acknowledged):
        return state.response_time
    return None
