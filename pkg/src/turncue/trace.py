"""Trace schema and JSON Lines serialization.

Every float that enters a trace record is canonically quantized to nine
significant digits at construction, so the in-memory record, its serialized
bytes, and a replayed copy are all bit-identical. Field order in the output
is fixed; identical runs produce identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Iterable

from .errors import TraceIntegrityError

Triple = tuple[float, float, float]


def q9(x: float) -> float:
    """Nearest double to the 9-significant-digit decimal of x."""
    return float(format(float(x), ".9g"))


def _q_triple(v) -> Triple:
    a, b, c = v
    return (q9(a), q9(b), q9(c))


_FLOAT_FIELDS = frozenset(
    {"t", "rt", "env", "spot_intensity", "spot_cone", "duck"}
)
_TRIPLE_FIELDS = frozenset(
    {
        "pos",
        "head",
        "gaze",
        "point_pos",
        "point_color",
        "spot_aim",
        "sound_pos",
        "panel_anchor",
        "icon_anchor",
        "sgd_center",
    }
)


@dataclass(frozen=True)
class TraceMeta:
    """Scenario identity stored as the first line of a trace file."""

    method: str
    role: str
    topic: int
    participant: int
    seed: int
    dt: float
    user_seat: int
    seats: tuple[Triple, ...]
    desk_anchor: Triple
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dt", q9(self.dt))
        object.__setattr__(self, "seats", tuple(_q_triple(s) for s in self.seats))
        object.__setattr__(self, "desk_anchor", _q_triple(self.desk_anchor))
        object.__setattr__(self, "names", tuple(self.names))


@dataclass(frozen=True)
class TraceRecord:
    """One tick of fully expanded cue state."""

    tick: int
    t: float
    pos: Triple
    head: Triple
    gaze: Triple
    state: str
    target: str | None
    rt: float | None
    in_view: bool | None
    role: str | None
    env: float
    point_active: bool
    point_side: str
    point_pos: Triple
    point_color: Triple
    spot_active: bool
    spot_intensity: float
    spot_cone: float
    spot_aim: Triple
    sound_pos: Triple
    chime: bool
    duck: float
    panel_active: bool
    panel_anchor: Triple
    panel_text: str
    icon_active: bool
    icon_anchor: Triple
    sgd_active: bool
    sgd_phase: bool
    sgd_center: Triple
    speaker: str

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _FLOAT_FIELDS and v is not None:
                object.__setattr__(self, f.name, q9(v))
            elif f.name in _TRIPLE_FIELDS:
                object.__setattr__(self, f.name, _q_triple(v))


@dataclass(frozen=True)
class Trace:
    meta: TraceMeta | None
    records: tuple[TraceRecord, ...]


def _emit(value) -> str:
    """JSON fragment with floats at 9 significant digits."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".9g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (tuple, list)):
        return "[" + ",".join(_emit(v) for v in value) + "]"
    raise TypeError(f"unserializable value {value!r}")


def _emit_obj(kind: str, obj) -> str:
    parts = [f'"kind":{json.dumps(kind)}']
    for f in fields(obj):
        parts.append(f"{json.dumps(f.name)}:{_emit(getattr(obj, f.name))}")
    return "{" + ",".join(parts) + "}"


def _check_contiguous(records: Iterable[TraceRecord]) -> None:
    for i, rec in enumerate(records):
        if rec.tick != i:
            raise TraceIntegrityError(f"tick {rec.tick} at position {i}: indices must be contiguous from 0")


def write_trace(records: Iterable[TraceRecord], meta: TraceMeta | None = None) -> str:
    """Serialize records (with an optional leading meta line) to JSON Lines."""
    records = tuple(records)
    _check_contiguous(records)
    lines = []
    if meta is not None:
        lines.append(_emit_obj("meta", meta))
    lines.extend(_emit_obj("frame", rec) for rec in records)
    return "".join(line + "\n" for line in lines)


def _tripled(v) -> Triple:
    return (float(v[0]), float(v[1]), float(v[2]))


def _meta_from_obj(obj: dict) -> TraceMeta:
    return TraceMeta(
        method=obj["method"],
        role=obj["role"],
        topic=int(obj["topic"]),
        participant=int(obj["participant"]),
        seed=int(obj["seed"]),
        dt=float(obj["dt"]),
        user_seat=int(obj["user_seat"]),
        seats=tuple(_tripled(s) for s in obj["seats"]),
        desk_anchor=_tripled(obj["desk_anchor"]),
        names=tuple(obj["names"]),
    )


def _record_from_obj(obj: dict) -> TraceRecord:
    kwargs = {}
    for f in fields(TraceRecord):
        v = obj[f.name]
        if f.name in _TRIPLE_FIELDS:
            v = _tripled(v)
        kwargs[f.name] = v
    return TraceRecord(**kwargs)


def read_trace(text: str) -> Trace:
    """Parse a JSON Lines trace; inverse of write_trace on its own output."""
    meta: TraceMeta | None = None
    records: list[TraceRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceIntegrityError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        kind = obj.get("kind")
        if kind == "meta":
            if records or meta is not None:
                raise TraceIntegrityError(f"line {lineno}: meta must be the first line")
            meta = _meta_from_obj(obj)
        elif kind == "frame":
            records.append(_record_from_obj(obj))
        else:
            raise TraceIntegrityError(f"line {lineno}: unknown record kind {kind!r}")
    _check_contiguous(records)
    return Trace(meta=meta, records=tuple(records))
