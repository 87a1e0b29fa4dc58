import csv
import io
import json
import math

import pytest

from bidifilter import (
    RESULT_FIELDS,
    LatencyParams,
    PolicySpec,
    ResultRow,
    SweepSpec,
    SyntheticSpec,
    level_capacities_for,
    run_single,
    run_sweep,
    trace_label,
    write_rows,
    write_rows_csv,
    write_rows_jsonl,
)
from bidifilter.harness import open_trace
from bidifilter.sketch import derive_seed
from bidifilter.workload import count_uniques

SMALL = SyntheticSpec(length=4000, ground_set=120, skew=0.8, recency=0.3, rng_seed=5)


def test_run_single_fields_and_closure():
    spec = PolicySpec("BiDiFilter", (8, 24), rng_seed=3)
    row = run_single(spec, open_trace(SMALL), trace_id="t0", check_invariants=False)
    assert row.trace_id == "t0"
    assert row.policy_name == "BiDiFilter"
    assert row.l1_capacity == 8 and row.l2_capacity == 24
    assert row.window_fraction == 0.5 and row.tie_break == "admit"
    assert row.requests == 4000
    total = row.h_l1_window + row.h_l1_veterans + row.h_l2 + row.misses
    assert total == row.requests
    assert row.hit_ratio == (row.requests - row.misses) / row.requests
    assert row.rng_seed == 3
    assert row.avg_rw_latency_ns >= row.avg_read_latency_ns > 0


def test_run_single_marks_inapplicable_knobs_none():
    demote = run_single(PolicySpec("Demote", (4, 12)), open_trace(SMALL))
    assert demote.window_fraction is None and demote.tie_break is None
    united = run_single(PolicySpec("BiDiFilterUnited", (4, 12)), open_trace(SMALL))
    assert united.window_fraction is None and united.tie_break == "admit"
    assert united.h_l1_veterans == 0


def test_run_single_rejects_empty_trace():
    with pytest.raises(ValueError):
        run_single(PolicySpec("Demote", (2, 4)), iter(()))


def test_run_single_invariant_mode_matches_fast_mode():
    spec = PolicySpec("BiDiFilter", (4, 12), rng_seed=1)
    small = SyntheticSpec(length=800, ground_set=50, skew=0.7, recency=0.2, rng_seed=2)
    a = run_single(spec, open_trace(small), check_invariants=True)
    b = run_single(spec, open_trace(small), check_invariants=False)
    assert a == b


def test_trace_label_forms():
    assert (
        trace_label(SyntheticSpec(length=100, ground_set=9, skew=0.75, recency=0.5, rng_seed=4))
        == "zipf-n100-g9-s0.75-r0.5-seed4"
    )
    assert trace_label("/tmp/some/dir/web.trace") == "web.trace"


def test_level_capacities_for():
    assert level_capacities_for(1000, 0.1, 0.2) == (20, 100)
    assert level_capacities_for(1000, 0.001, 0.5) == (1, 1)  # clamped
    assert level_capacities_for(1000, 0.1, 0.25, n_levels=4) == (25, 100, 400, 1600)
    assert level_capacities_for(50, 0.5, 0.3) == (8, 25)  # round(7.5) banker's


def test_sweep_spec_validation():
    pols = (PolicySpec("Demote", (1, 1)),)
    with pytest.raises(ValueError):
        SweepSpec(SMALL, (), (0.1,), (0.2,))
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (), (0.2,))
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (0.1,), ())
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (1.5,), (0.2,))
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (0.0,), (0.2,))
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (0.1,), (1.0,))
    with pytest.raises(ValueError):
        SweepSpec(SMALL, pols, (0.1,), (0.2,), n_levels=1)
    with pytest.raises(ValueError):
        # default latency params only cover two levels
        SweepSpec(SMALL, pols, (0.1,), (0.2,), n_levels=3)


def sweep_fixture(**overrides):
    base = dict(
        trace_source=SMALL,
        policies=(
            PolicySpec("BiDiFilter", (1, 1), rng_seed=0),
            PolicySpec("Demote", (1, 1)),
        ),
        l2_size_percents=(0.1, 0.3),
        l1_ratios=(0.2,),
        master_seed=99,
    )
    base.update(overrides)
    return SweepSpec(**base)


def test_run_sweep_order_and_seeds():
    rows = run_sweep(sweep_fixture())
    assert len(rows) == 4  # 2 policies x 2 percents x 1 ratio
    assert [r.policy_name for r in rows] == ["BiDiFilter", "BiDiFilter", "Demote", "Demote"]
    # capacities resolved against the distinct-key count of the trace
    uniques, _ = count_uniques(open_trace(SMALL))
    assert rows[0].l2_capacity == max(1, round(0.1 * uniques))
    assert rows[1].l2_capacity == max(1, round(0.3 * uniques))
    assert rows[0].l1_capacity == max(1, round(0.2 * rows[0].l2_capacity))
    # per-cell seeds derive from (master, cell index)
    assert [r.rng_seed for r in rows] == [derive_seed(99, i) for i in range(4)]
    assert all(r.trace_id == trace_label(SMALL) for r in rows)


def test_run_sweep_is_reproducible():
    assert run_sweep(sweep_fixture()) == run_sweep(sweep_fixture())


def test_run_sweep_parallel_matches_serial():
    spec = sweep_fixture()
    assert run_sweep(spec, jobs=2) == run_sweep(spec, jobs=1)


def test_run_sweep_n_levels_geometry():
    rows = run_sweep(sweep_fixture(policies=(PolicySpec("BiDiFilter", (1, 1)),),
                                   l2_size_percents=(0.2,), l1_ratios=(0.5,),
                                   n_levels=3,
                                   latency=LatencyParams((100.0, 200_000.0, 500_000.0))))
    assert len(rows) == 1
    # row reports the first two levels of the resolved geometry
    uniques, _ = count_uniques(open_trace(SMALL))
    l2 = max(1, round(0.2 * uniques))
    assert rows[0].l2_capacity == l2
    assert rows[0].l1_capacity == max(1, round(0.5 * l2))


def test_run_sweep_file_trace(tmp_path):
    trace = tmp_path / "tiny.trace"
    trace.write_text("a,8192\nb\na,4096\nc,100\nb\n")
    rows = run_sweep(sweep_fixture(trace_source=str(trace),
                                   policies=(PolicySpec("NaiveLRU", (1, 1)),),
                                   l2_size_percents=(0.5,), l1_ratios=(0.5,)))
    assert rows[0].trace_id == "tiny.trace"
    # a#0,a#1,b#0,a#0,c#0,b#0 -> 6 chunk accesses over 4 distinct chunks
    assert rows[0].requests == 6
    assert rows[0].l2_capacity == 2


def test_run_sweep_empty_trace_errors(tmp_path):
    trace = tmp_path / "empty.trace"
    trace.write_text("# nothing but comments\n\n")
    with pytest.raises(ValueError):
        run_sweep(sweep_fixture(trace_source=str(trace)))


def make_row(**overrides):
    base = dict(
        trace_id="t", policy_name="Demote", l2_capacity=10, l1_capacity=2,
        window_fraction=None, tie_break=None, requests=4, h_l1_window=1,
        h_l1_veterans=0, h_l2=1, misses=2, w_l1=3, w_l2=1, hit_ratio=0.5,
        avg_read_latency_ns=1050.5, avg_rw_latency_ns=2000.0, rng_seed=7,
    )
    base.update(overrides)
    return ResultRow(**base)


def test_csv_header_and_none_rendering():
    buf = io.StringIO()
    write_rows_csv([make_row()], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(RESULT_FIELDS)
    record = next(csv.DictReader(io.StringIO(buf.getvalue())))
    assert record["window_fraction"] == ""
    assert record["tie_break"] == ""
    assert record["hit_ratio"] == "0.5"
    assert record["avg_read_latency_ns"] == "1050.5"


def test_jsonl_round_trip():
    buf = io.StringIO()
    rows = [make_row(), make_row(trace_id="u", window_fraction=0.5, tie_break="admit")]
    write_rows_jsonl(rows, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert list(first) == list(RESULT_FIELDS)
    assert first["window_fraction"] is None
    second = json.loads(lines[1])
    assert second["window_fraction"] == 0.5
    assert second["tie_break"] == "admit"


def test_write_rows_to_files(tmp_path):
    rows = [make_row()]
    csv_path = tmp_path / "out.csv"
    jsonl_path = tmp_path / "out.jsonl"
    write_rows(rows, csv_path, "csv")
    write_rows(rows, jsonl_path, "jsonl")
    assert csv_path.read_text().startswith("trace_id,")
    assert json.loads(jsonl_path.read_text())["policy_name"] == "Demote"
    with pytest.raises(ValueError):
        write_rows(rows, tmp_path / "x", "parquet")


def test_csv_and_jsonl_agree_on_values():
    rows = run_sweep(sweep_fixture())
    cbuf, jbuf = io.StringIO(), io.StringIO()
    write_rows_csv(rows, cbuf)
    write_rows_jsonl(rows, jbuf)
    csv_rows = list(csv.DictReader(io.StringIO(cbuf.getvalue())))
    jsonl_rows = [json.loads(line) for line in jbuf.getvalue().splitlines()]
    assert len(csv_rows) == len(jsonl_rows) == len(rows)
    for c, j in zip(csv_rows, jsonl_rows):
        for field in RESULT_FIELDS:
            cv, jv = c[field], j[field]
            if jv is None:
                assert cv == ""
            elif isinstance(jv, float):
                assert math.isclose(float(cv), jv, rel_tol=0, abs_tol=0)
            else:
                assert cv == str(jv)