"""Response-time and miss-count extraction from traces.

Response times are read off the session state transitions recorded in the
trace, never recomputed from pose geometry, so live and replayed analysis
cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import TraceIntegrityError
from .trace import Trace

# Legal session-tag successions within one trace.
_ALLOWED = {
    "idle": {"idle", "signaled"},
    "signaled": {"signaled", "acknowledged", "missed"},
    "acknowledged": {"acknowledged", "signaled"},
    "missed": {"missed", "signaled"},
}

CellKey = tuple[str, str, str]  # (method, "in"/"out", "speaker"/"listener")


@dataclass(frozen=True)
class CellStats:
    """One (method, view, role) cell: n = acknowledged + missed sessions."""

    n: int
    missed: int
    mean_rt: float | None
    min_rt: float | None
    max_rt: float | None


@dataclass(frozen=True)
class MetricsSummary:
    cells: dict[CellKey, CellStats]


@dataclass
class _SessionOutcome:
    key: CellKey
    rt: float | None  # None means missed


def _scan_trace(trace: Trace) -> list[_SessionOutcome]:
    if trace.meta is None:
        raise TraceIntegrityError("trace has no meta line; method is unknown")
    method = trace.meta.method
    outcomes: list[_SessionOutcome] = []
    prev = "idle"
    open_session = False
    for rec in trace.records:
        if rec.state not in _ALLOWED:
            raise TraceIntegrityError(f"tick {rec.tick}: unknown session state '{rec.state}'")
        if rec.state not in _ALLOWED[prev]:
            raise TraceIntegrityError(
                f"tick {rec.tick}: illegal session transition {prev} -> {rec.state}"
            )
        entering = rec.state != prev
        if rec.state == "signaled":
            if entering:
                open_session = True
            if rec.in_view is None or rec.role is None:
                raise TraceIntegrityError(f"tick {rec.tick}: signaled frame lacks view/role")
        elif entering and rec.state in ("acknowledged", "missed"):
            if not open_session:
                raise TraceIntegrityError(
                    f"tick {rec.tick}: terminal state without a preceding signal"
                )
            if rec.in_view is None or rec.role is None:
                raise TraceIntegrityError(f"tick {rec.tick}: terminal frame lacks view/role")
            key = (method, "in" if rec.in_view else "out", rec.role)
            if rec.state == "acknowledged":
                if rec.rt is None:
                    raise TraceIntegrityError(
                        f"tick {rec.tick}: acknowledged frame lacks a response time"
                    )
                outcomes.append(_SessionOutcome(key, rec.rt))
            else:
                outcomes.append(_SessionOutcome(key, None))
            open_session = False
        prev = rec.state
    return outcomes


def extract_metrics(traces: Iterable[Trace]) -> MetricsSummary:
    """Group session outcomes by (method, view, role)."""
    grouped: dict[CellKey, list[float | None]] = {}
    for trace in traces:
        for outcome in _scan_trace(trace):
            grouped.setdefault(outcome.key, []).append(outcome.rt)
    cells: dict[CellKey, CellStats] = {}
    for key, rts in grouped.items():
        acked = [r for r in rts if r is not None]
        cells[key] = CellStats(
            n=len(rts),
            missed=len(rts) - len(acked),
            mean_rt=sum(acked) / len(acked) if acked else None,
            min_rt=min(acked) if acked else None,
            max_rt=max(acked) if acked else None,
        )
    return MetricsSummary(cells=cells)


def metrics_to_csv(summary: MetricsSummary) -> str:
    """Stable CSV rendering: method,view,role,n,mean_rt,min_rt,max_rt,missed."""

    def num(v: float | None) -> str:
        return "nan" if v is None else format(v, ".9g")

    lines = ["method,view,role,n,mean_rt,min_rt,max_rt,missed"]
    for key in sorted(summary.cells):
        method, view, role = key
        c = summary.cells[key]
        lines.append(
            f"{method},{view},{role},{c.n},{num(c.mean_rt)},{num(c.min_rt)},{num(c.max_rt)},{c.missed}"
        )
    return "".join(line + "\n" for line in lines)
