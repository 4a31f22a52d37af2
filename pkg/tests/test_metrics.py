import pytest

from _rand import make_meta, make_record
from turncue.errors import TraceIntegrityError
from turncue.metrics import extract_metrics, metrics_to_csv
from turncue.trace import Trace


def session_trace(outcome="acknowledged", rt=2.0, in_view=False, role="listener", method="light_audio"):
    records = [
        make_record(0, 0.0, "idle"),
        make_record(1, 0.1, "signaled", in_view=in_view, role=role),
        make_record(2, 0.2, "signaled", in_view=in_view, role=role),
        make_record(
            3, 0.3, outcome,
            rt=rt if outcome == "acknowledged" else None,
            in_view=in_view, role=role,
        ),
    ]
    return Trace(meta=make_meta(method=method, role=role), records=tuple(records))


def test_single_acknowledged_trace():
    summary = extract_metrics([session_trace()])
    cell = summary.cells[("light_audio", "out", "listener")]
    assert cell.n == 1
    assert cell.missed == 0
    assert cell.mean_rt == 2.0
    assert cell.min_rt == 2.0 and cell.max_rt == 2.0


def test_single_missed_trace():
    summary = extract_metrics([session_trace(outcome="missed")])
    cell = summary.cells[("light_audio", "out", "listener")]
    assert cell.n == 1
    assert cell.missed == 1
    assert cell.mean_rt is None


def test_cells_keyed_by_method_view_role():
    traces = [
        session_trace(in_view=True, role="speaker", method="sgd"),
        session_trace(in_view=False, role="listener", method="sgd"),
        session_trace(in_view=True, role="speaker", method="light"),
    ]
    summary = extract_metrics(traces)
    assert set(summary.cells) == {
        ("sgd", "in", "speaker"),
        ("sgd", "out", "listener"),
        ("light", "in", "speaker"),
    }


def test_broken_sequence_names_tick():
    records = [
        make_record(0, 0.0, "idle"),
        make_record(1, 0.1, "acknowledged", rt=1.0, in_view=True, role="listener"),
    ]
    trace = Trace(meta=make_meta(), records=tuple(records))
    with pytest.raises(TraceIntegrityError, match="tick 1"):
        extract_metrics([trace])


def test_acknowledged_without_rt_rejected():
    records = [
        make_record(0, 0.0, "signaled", in_view=True, role="listener"),
        make_record(1, 0.1, "acknowledged", rt=None, in_view=True, role="listener"),
    ]
    trace = Trace(meta=make_meta(), records=tuple(records))
    with pytest.raises(TraceIntegrityError, match="response time"):
        extract_metrics([trace])


def test_trace_without_meta_rejected():
    trace = Trace(meta=None, records=(make_record(0, 0.0),))
    with pytest.raises(TraceIntegrityError, match="meta"):
        extract_metrics([trace])


def test_mean_over_multiple_sessions():
    traces = [session_trace(rt=1.0), session_trace(rt=3.0), session_trace(outcome="missed")]
    cell = extract_metrics(traces).cells[("light_audio", "out", "listener")]
    assert cell.n == 3
    assert cell.missed == 1
    assert cell.mean_rt == 2.0
    assert cell.min_rt == 1.0
    assert cell.max_rt == 3.0


def test_csv_shape():
    csv = metrics_to_csv(extract_metrics([session_trace()]))
    lines = csv.splitlines()
    assert lines[0] == "method,view,role,n,mean_rt,min_rt,max_rt,missed"
    assert lines[1] == "light_audio,out,listener,1,2,2,2,0"


def test_csv_nan_for_empty_rt():
    csv = metrics_to_csv(extract_metrics([session_trace(outcome="missed")]))
    assert csv.splitlines()[1] == "light_audio,out,listener,1,nan,nan,nan,1"


def test_empty_input_empty_summary():
    summary = extract_metrics([])
    assert summary.cells == {}
    assert metrics_to_csv(summary).splitlines() == ["method,view,role,n,mean_rt,min_rt,max_rt,missed"]
