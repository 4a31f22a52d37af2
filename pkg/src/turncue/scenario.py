"""Deterministic replay of the evaluation protocol.

A scenario is a scripted group conversation around a table: five virtual
agents plus one synthetic user. Turns hand off either on a schedule (when
the user is the incoming speaker) or through a guidance signal fired
signal_offset seconds into the current turn, resolved by the user's
acknowledgment or by the miss timeout. The user is a seeded gaze agent:
it fixates the current speaker, perceives a signal after a sampled latency,
then rotates head (gaze in tow) toward the new speaker at a fixed angular
speed.

Everything is fixed-step and seeded; the same inputs produce byte-identical
traces on every run, which is what makes golden-file comparison and
parallel suite execution safe.
"""

from __future__ import annotations

import hashlib
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

from . import session as sess
from .audio import Role, SoundSourceState
from .baselines import sgd_state, text_icon_state
from .config import GuidanceConfig
from .errors import ScriptError
from .geometry import Pose, Vec3, angular_deviation
from .metrics import MetricsSummary, extract_metrics
from .session import CueFrame, SessionState
from .trace import Trace, TraceMeta, TraceRecord


class Method(Enum):
    LIGHT_AUDIO = "light_audio"
    LIGHT = "light"
    SGD = "sgd"
    TEXT_ICON = "text_icon"


METHODS = (Method.LIGHT_AUDIO, Method.LIGHT, Method.SGD, Method.TEXT_ICON)

AGENT_COUNT = 5
USER_ID = "user"

# Balanced 4x4 Latin square (Williams design): every method appears in every
# presentation position exactly once across four consecutive participants.
LATIN_SQUARE_4 = (
    (0, 1, 3, 2),
    (1, 2, 0, 3),
    (2, 3, 1, 0),
    (3, 0, 2, 1),
)

NAME_POOL = (
    "Alex", "Blair", "Casey", "Drew", "Emery", "Flynn", "Harper", "Jordan",
)


def stable_seed(*parts) -> int:
    """Platform-stable 64-bit seed derived from the given parts."""
    key = ":".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


@dataclass(frozen=True)
class Turn:
    speaker: str
    duration: float


@dataclass(frozen=True)
class ScenarioScript:
    """One trial: seat layout, method, role designation, turn schedule."""

    seats: tuple[Vec3, ...]
    user_seat_index: int
    role: Role
    method: Method
    turn_order: tuple[Turn, ...]
    signal_offset: float = 5.0
    topic: int = 0
    desk_anchor: Vec3 | None = None
    names: tuple[str, ...] = ("Agent1", "Agent2", "Agent3", "Agent4", "Agent5")


@dataclass(frozen=True)
class GazeAgentModel:
    """Synthetic stand-in for the human participant.

    Latencies are pure configuration (per method and per in/out-of-view),
    not claims about human performance. With gaze_lead 0 the gaze simply
    mirrors the head during rotation.
    """

    head_speed: float = 120.0
    gaze_speed: float = 240.0
    gaze_lead: float = 0.0
    latency_in: float = 0.35
    latency_out: float = 0.6
    latency_jitter: float = 0.05
    latency_overrides: tuple[tuple[str, str, float], ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if self.head_speed <= 0.0 or self.gaze_speed <= 0.0:
            raise ScriptError("agent rotation speeds must be > 0")
        if self.latency_in < 0.0 or self.latency_out < 0.0 or self.latency_jitter < 0.0:
            raise ScriptError("agent latencies and jitter must be >= 0")
        if self.gaze_lead < 0.0:
            raise ScriptError("gaze_lead must be >= 0")

    def latency_for(self, method: Method, in_view: bool) -> tuple[float, float]:
        view = "in" if in_view else "out"
        for m, v, mean in self.latency_overrides:
            if m == method.value and v == view:
                return mean, self.latency_jitter
        return (self.latency_in if in_view else self.latency_out), self.latency_jitter


def agent_ids(script: ScenarioScript) -> tuple[str, ...]:
    return tuple(f"a{i + 1}" for i in range(AGENT_COUNT))


def _seat_index_of(script: ScenarioScript, who: str) -> int:
    if who == USER_ID:
        return script.user_seat_index
    non_user = [i for i in range(len(script.seats)) if i != script.user_seat_index]
    idx = int(who[1:]) - 1
    return non_user[idx]


def seat_of(script: ScenarioScript, who: str) -> Vec3:
    return script.seats[_seat_index_of(script, who)]


def display_name(script: ScenarioScript, who: str) -> str:
    if who == USER_ID:
        return "Charlie"
    return script.names[int(who[1:]) - 1]


def validate_script(script: ScenarioScript) -> None:
    """Reject a malformed script before any simulation runs."""
    if len(script.seats) != AGENT_COUNT + 1:
        raise ScriptError(
            f"seats: expected {AGENT_COUNT + 1} entries (user + {AGENT_COUNT} agents), got {len(script.seats)}"
        )
    if not 0 <= script.user_seat_index < len(script.seats):
        raise ScriptError(f"user_seat_index={script.user_seat_index} out of range")
    if len(script.names) != AGENT_COUNT:
        raise ScriptError(f"names: expected {AGENT_COUNT}, got {len(script.names)}")
    if not script.turn_order:
        raise ScriptError("turn_order is empty")
    valid_ids = {USER_ID, *agent_ids(script)}
    for turn in script.turn_order:
        if turn.speaker not in valid_ids:
            raise ScriptError(f"turn references unknown speaker id '{turn.speaker}'")
        if turn.duration <= 0.0:
            raise ScriptError(f"turn duration {turn.duration} for '{turn.speaker}' must be > 0")
    if script.signal_offset <= 0.0:
        raise ScriptError(f"signal_offset={script.signal_offset} must be > 0")


def rotate_toward(current: Vec3, target_dir: Vec3, max_step_deg: float) -> Vec3:
    """Rotate a unit direction toward another by at most max_step_deg."""
    if max_step_deg <= 0.0:
        return current
    ang = angular_deviation(current, target_dir)
    if ang <= max_step_deg:
        return target_dir
    if ang >= 180.0 - 1e-9:
        # Antipodal: no unique arc. Swing through the horizontal right of
        # the current direction (mirrors the lateral tie-break).
        waypoint = Vec3(current.z, 0.0, -current.x)
        if waypoint.norm() <= 1e-9:
            waypoint = Vec3(1.0, 0.0, 0.0)
        target_dir = waypoint.normalized()
        ang = angular_deviation(current, target_dir)
        if ang <= max_step_deg:
            return target_dir
    omega = math.radians(ang)
    u = max_step_deg / ang
    a = math.sin((1.0 - u) * omega) / math.sin(omega)
    b = math.sin(u * omega) / math.sin(omega)
    return (current.scaled(a) + target_dir.scaled(b)).normalized()


# ---------------------------------------------------------------------------
# Default room and turn templates
# ---------------------------------------------------------------------------

DEFAULT_SEAT_RADIUS = 1.2
DEFAULT_EYE_HEIGHT = 1.15

# Designated relative seats (steps around the hexagon from the user):
# the conversation partner sits opposite; the out-of-view new speaker is the
# immediate neighbor (60 degrees off the partner direction); the within-view
# one sits two seats around (30 degrees off the previous speaker direction).
_PARTNER_STEP = 3
_OUT_STEP = 1
_IN_STEP = 2


def hexagon_seats(radius: float = DEFAULT_SEAT_RADIUS, eye_height: float = DEFAULT_EYE_HEIGHT) -> tuple[Vec3, ...]:
    """Six seats evenly spaced around the table center."""
    seats = []
    for k in range(6):
        ang = math.radians(60.0 * k)
        seats.append(Vec3(radius * math.cos(ang), eye_height, radius * math.sin(ang)))
    return tuple(seats)


def default_desk_anchor(seats: tuple[Vec3, ...], user_seat_index: int) -> Vec3:
    """Desk surface point in front of the user, below eye line."""
    seat = seats[user_seat_index]
    toward_center = Vec3(-seat.x, 0.0, -seat.z)
    if toward_center.norm() <= 1e-9:
        toward_center = Vec3(1.0, 0.0, 0.0)
    return seat + toward_center.normalized().scaled(0.45) + Vec3(0.0, -0.25, 0.0)


def default_script(
    method: Method,
    role: Role,
    topic: int = 0,
    user_seat_index: int = 0,
    names: tuple[str, ...] = ("Agent1", "Agent2", "Agent3", "Agent4", "Agent5"),
    seat_radius: float = DEFAULT_SEAT_RADIUS,
    eye_height: float = DEFAULT_EYE_HEIGHT,
) -> ScenarioScript:
    """Trial script with the documented default layout and turn schedule.

    Listener trials run three agent turns with both handoffs signal-driven
    while the user listens; speaker trials alternate agent prompts with user
    answers so both signals arrive while the user is speaking. Each trial
    contains one out-of-view and one within-view signal.
    """
    seats = hexagon_seats(seat_radius, eye_height)
    non_user = [i for i in range(6) if i != user_seat_index]

    def agent_at_step(step: int) -> str:
        seat_index = (user_seat_index + step) % 6
        return f"a{non_user.index(seat_index) + 1}"

    partner = agent_at_step(_PARTNER_STEP)
    out_agent = agent_at_step(_OUT_STEP)
    in_agent = agent_at_step(_IN_STEP)

    if role is Role.LISTENER:
        turns = (Turn(partner, 10.0), Turn(out_agent, 10.0), Turn(in_agent, 12.0))
    else:
        turns = (
            Turn(partner, 8.0),
            Turn(USER_ID, 12.0),
            Turn(out_agent, 8.0),
            Turn(USER_ID, 12.0),
            Turn(in_agent, 10.0),
        )
    return ScenarioScript(
        seats=seats,
        user_seat_index=user_seat_index,
        role=role,
        method=method,
        turn_order=turns,
        topic=topic,
        desk_anchor=default_desk_anchor(seats, user_seat_index),
        names=names,
    )


# ---------------------------------------------------------------------------
# Scenario execution
# ---------------------------------------------------------------------------


def _session_fields(state: SessionState) -> tuple[float | None, bool | None, str | None]:
    if isinstance(state, sess.Signaled):
        return None, state.target_in_view_at_signal, state.role.value
    if isinstance(state, sess.Acknowledged):
        return state.response_time, state.target_in_view_at_signal, state.role.value
    if isinstance(state, sess.Missed):
        return None, state.target_in_view_at_signal, state.role.value
    return None, None, None


def _masked_frame(
    frame: CueFrame,
    method: Method,
    state: SessionState,
    config: GuidanceConfig,
    target: Vec3 | None,
) -> CueFrame:
    """Restrict the cue frame to the channels the trial's method presents."""
    if method is Method.LIGHT_AUDIO:
        return frame
    rest = target if target is not None else frame.sound.position
    silent = SoundSourceState(position=rest, chime_active=False)
    if method is Method.LIGHT:
        return replace(frame, duck_gain=1.0, sound=silent)
    # Baseline methods: no light or audio manipulation at all.
    original = getattr(state, "original_env", config.env_levels.l_max)
    return replace(
        frame,
        env_intensity=original,
        point=replace(frame.point, active=False),
        spot=replace(frame.spot, active=False, intensity=0.0, cone_angle=config.spot_geometry.a_min),
        sound=silent,
        duck_gain=1.0,
    )


def run_scenario(
    script: ScenarioScript,
    agent: GazeAgentModel,
    config: GuidanceConfig,
    dt: float = 1.0 / 72.0,
    seed: int = 0,
    participant: int = 0,
) -> Trace:
    """Replay one trial tick by tick and return its full trace.

    Turn handoffs to an agent are signal-driven: the incoming speaker
    signals signal_offset seconds into the current turn and the turn ends
    at acknowledgment or at the miss timeout. Handoffs to the user are
    scripted at the current turn's full duration. The final turn runs its
    scripted duration and ends the scenario.
    """
    validate_script(script)
    if not 0.0 < dt <= 0.1:
        raise ScriptError(f"dt={dt} must lie in (0, 0.1]")

    rng = random.Random(stable_seed("scenario", seed, agent.seed))
    turns = script.turn_order
    user_pos = script.seats[script.user_seat_index]
    desk = script.desk_anchor or default_desk_anchor(script.seats, script.user_seat_index)

    def ticks_of(duration: float) -> int:
        # first tick at or after the duration; exact when divisible by dt
        return max(1, math.ceil(duration / dt - 1e-9))

    def idle_focus(turn_idx: int) -> Vec3:
        speaker = turns[turn_idx].speaker
        if speaker != USER_ID:
            return seat_of(script, speaker)
        for j in range(turn_idx - 1, -1, -1):
            if turns[j].speaker != USER_ID:
                return seat_of(script, turns[j].speaker)
        for t in turns:
            if t.speaker != USER_ID:
                return seat_of(script, t.speaker)
        return seat_of(script, "a1")

    def setup_turn(turn_idx: int, start_tick: int):
        """Returns (signal_tick, next_speaker, scripted_end_tick, scenario_end_tick)."""
        if turn_idx + 1 < len(turns):
            nxt = turns[turn_idx + 1].speaker
            if nxt == USER_ID:
                return None, None, start_tick + ticks_of(turns[turn_idx].duration), None
            return start_tick + ticks_of(script.signal_offset), nxt, None, None
        return None, None, None, start_tick + ticks_of(turns[turn_idx].duration)

    turn_idx = 0
    signal_tick, next_speaker, scripted_end_tick, scenario_end_tick = setup_turn(0, 0)

    state: SessionState = sess.IDLE
    target_id: str | None = None
    target: Vec3 | None = None
    perceive_time = math.inf
    pending_handoff = False

    head = (idle_focus(0) - user_pos).normalized()
    gaze = head

    records: list[TraceRecord] = []
    max_ticks = int(
        (sum(t.duration for t in turns) + len(turns) * (script.signal_offset + config.miss_timeout + 2.0))
        / dt
    ) + 16

    k = 0
    while True:
        t = k * dt
        if scenario_end_tick is not None and k >= scenario_end_tick:
            break
        if k > max_ticks:
            raise ScriptError("scenario failed to terminate; check turn schedule")

        # Turn handoff: a session resolved last tick, or a scripted end passed.
        if pending_handoff or (scripted_end_tick is not None and k >= scripted_end_tick):
            pending_handoff = False
            turn_idx += 1
            signal_tick, next_speaker, scripted_end_tick, scenario_end_tick = setup_turn(turn_idx, k)

        # Head motion for this tick: toward the signal target once perceived,
        # otherwise hold on the current speaker.
        if isinstance(state, sess.Signaled) and target is not None and t >= perceive_time:
            attention = target
        else:
            attention = idle_focus(turn_idx)
        attention_dir = (attention - user_pos).normalized()
        head = rotate_toward(head, attention_dir, agent.head_speed * dt)
        if agent.gaze_lead > 0.0 and isinstance(state, sess.Signaled) and target is not None:
            gaze = rotate_toward(head, (target - user_pos).normalized(), agent.gaze_lead)
        else:
            gaze = head
        pose = Pose(position=user_pos, head_forward=head, gaze_forward=gaze, timestamp=t)

        # Fire the pending signal: capture the pose as it is right now.
        if signal_tick is not None and k >= signal_tick and not isinstance(state, sess.Signaled):
            target_id = next_speaker
            target = seat_of(script, next_speaker)
            role_now = Role.SPEAKER if turns[turn_idx].speaker == USER_ID else Role.LISTENER
            state = sess.begin_signal(state, pose, target, role_now, config)
            mean, jitter = agent.latency_for(script.method, state.target_in_view_at_signal)
            latency = max(0.0, mean + jitter * (2.0 * rng.random() - 1.0))
            perceive_time = signal_tick * dt + latency
            signal_tick = None

        was_signaled = isinstance(state, sess.Signaled)
        state, frame = sess.tick(state, pose, target, dt, config)
        if was_signaled and isinstance(state, (sess.Acknowledged, sess.Missed)):
            pending_handoff = True
            perceive_time = math.inf

        frame = _masked_frame(frame, script.method, state, config, target)

        ti = text_icon_state(state, target or desk, display_name(script, target_id) if target_id else "", desk)
        if script.method is not Method.TEXT_ICON:
            ti = replace(ti, panel_active=False, icon_active=False, panel_text="")
        sg = sgd_state(state, pose, target or desk, t, config.ack_threshold)
        if script.method is not Method.SGD:
            sg = replace(sg, active=False)

        rt, in_view, role_tag = _session_fields(state)
        records.append(
            TraceRecord(
                tick=k,
                t=t,
                pos=pose.position.to_tuple(),
                head=head.to_tuple(),
                gaze=gaze.to_tuple(),
                state=frame.session_state,
                target=target_id,
                rt=rt,
                in_view=in_view,
                role=role_tag,
                env=frame.env_intensity,
                point_active=frame.point.active,
                point_side=frame.point.side.value,
                point_pos=frame.point.position.to_tuple(),
                point_color=frame.point.color.to_tuple(),
                spot_active=frame.spot.active,
                spot_intensity=frame.spot.intensity,
                spot_cone=frame.spot.cone_angle,
                spot_aim=frame.spot.aim.to_tuple(),
                sound_pos=frame.sound.position.to_tuple(),
                chime=frame.sound.chime_active,
                duck=frame.duck_gain,
                panel_active=ti.panel_active,
                panel_anchor=ti.panel_anchor.to_tuple(),
                panel_text=ti.panel_text,
                icon_active=ti.icon_active,
                icon_anchor=ti.icon_anchor.to_tuple(),
                sgd_active=sg.active,
                sgd_phase=sg.phase_on,
                sgd_center=sg.region_center.to_tuple(),
                speaker=turns[turn_idx].speaker,
            )
        )
        k += 1

    meta = TraceMeta(
        method=script.method.value,
        role=script.role.value,
        topic=script.topic,
        participant=participant,
        seed=seed,
        dt=dt,
        user_seat=script.user_seat_index,
        seats=tuple(s.to_tuple() for s in script.seats),
        desk_anchor=desk.to_tuple(),
        names=script.names,
    )
    return Trace(meta=meta, records=tuple(records))


# ---------------------------------------------------------------------------
# Study plan: methods x roles grid with counterbalancing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialSpec:
    participant: int
    order_index: int
    method: Method
    role: Role
    topic: int
    user_seat_index: int
    names: tuple[str, ...]


@dataclass(frozen=True)
class StudyPlan:
    participants: int
    seat_radius: float = DEFAULT_SEAT_RADIUS
    eye_height: float = DEFAULT_EYE_HEIGHT
    topic_count: int = 8
    trials: tuple[TrialSpec, ...] = field(default=())


def randomize_presentation(plan: StudyPlan, seed: int) -> StudyPlan:
    """Assign method orders, topics, seats, and agent names to every trial.

    Method order per participant is a row of a balanced 4x4 Latin square
    (participant index mod 4); the eight topics split evenly between the two
    role blocks and the user's seat alternates between the two designated
    seats, giving a 4/4 split; agent names are re-drawn before every topic.
    """
    if plan.topic_count != 8:
        raise ScriptError(f"topic_count={plan.topic_count}: the protocol uses 8 topics")
    trials: list[TrialSpec] = []
    for p in range(plan.participants):
        rng = random.Random(stable_seed("plan", seed, p))
        order = LATIN_SQUARE_4[p % 4]
        speaker_topics = list(range(4))
        listener_topics = list(range(4, 8))
        rng.shuffle(speaker_topics)
        rng.shuffle(listener_topics)
        first_seat = rng.choice((0, 3))
        idx = 0
        for role, topics in ((Role.SPEAKER, speaker_topics), (Role.LISTENER, listener_topics)):
            for m in order:
                names = tuple(rng.sample(NAME_POOL, AGENT_COUNT))
                seat = first_seat if idx % 2 == 0 else 3 - first_seat
                trials.append(
                    TrialSpec(
                        participant=p,
                        order_index=idx,
                        method=METHODS[m],
                        role=role,
                        topic=topics[idx % 4],
                        user_seat_index=seat,
                        names=names,
                    )
                )
                idx += 1
    return replace(plan, trials=tuple(trials))


def script_for_trial(plan: StudyPlan, trial: TrialSpec) -> ScenarioScript:
    return default_script(
        method=trial.method,
        role=trial.role,
        topic=trial.topic,
        user_seat_index=trial.user_seat_index,
        names=trial.names,
        seat_radius=plan.seat_radius,
        eye_height=plan.eye_height,
    )


@dataclass(frozen=True)
class SuiteResult:
    traces: tuple[Trace, ...]
    summary: MetricsSummary


def run_suite(
    plan: StudyPlan,
    agent: GazeAgentModel,
    config: GuidanceConfig,
    dt: float = 1.0 / 72.0,
    seed: int = 0,
    jobs: int = 1,
) -> SuiteResult:
    """Execute every trial of the plan and aggregate the metrics.

    Trials are independent and each derives its own seed from (seed,
    participant, order index), so parallel execution merges in plan order
    without changing any output byte.
    """
    if not plan.trials:
        plan = randomize_presentation(plan, seed)

    def run_one(trial: TrialSpec) -> Trace:
        script = script_for_trial(plan, trial)
        trial_seed = stable_seed("trial", seed, trial.participant, trial.order_index)
        return run_scenario(script, agent, config, dt, trial_seed, participant=trial.participant)

    if jobs > 1 and len(plan.trials) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            traces = tuple(pool.map(run_one, plan.trials))
    else:
        traces = tuple(run_one(tr) for tr in plan.trials)
    return SuiteResult(traces=traces, summary=extract_metrics(traces))
