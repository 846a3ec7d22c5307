"""Tests for the JSON run and bench reports."""

from __future__ import annotations

import json

from lllhnf.constants import REPORT_SCHEMA_VERSION
from lllhnf.engine import EngineConfig
from lllhnf.exact_linalg import IntMatrix
from lllhnf.instance import ProblemInstance
from lllhnf.pipeline import run_pipeline
from lllhnf.report import bench_report, final_pivots, run_report, write_report


def _walk(value):
    if isinstance(value, dict):
        for v in value.values():
            yield from _walk(v)
    elif isinstance(value, list):
        for v in value:
            yield from _walk(v)
    else:
        yield value


def _outcome(rows, level="checkpoints", name="g"):
    return run_pipeline(ProblemInstance(IntMatrix.from_rows(rows), name=name), EngineConfig(check_level=level))


def test_run_report_core_fields():
    doc = run_report(_outcome([[4], [6]]))
    assert doc["schema_version"] == REPORT_SCHEMA_VERSION
    assert doc["input"] == {"m": "2", "n": "1"}
    assert doc["B"] == "36"
    assert doc["rank"] == "1"
    assert doc["isodim"] == "1"
    assert doc["pivots"] == [{"row": "2", "col": "1", "value": "2"}]
    assert doc["hard_violations"] == []
    assert doc["ok"] is True
    assert doc["metrics"]["counts"]["swaps"] == "2"
    assert len(doc["analysis"]["checkpoints"]) == 3
    assert doc["analysis"]["checkpoints"][-1]["det_gram_mix_integral"] is True
    assert doc["analysis"]["trickledown"][0]["r"] == {"2": "2"}


def test_only_floats_are_empirical_c():
    doc = run_report(_outcome([[3, 1, 4], [1, 5, 9], [2, 6, 5]], level="full"))
    floats = [v for v in _walk(doc) if isinstance(v, float)]
    assert floats == [doc["metrics"]["empirical_c"]]
    assert round(floats[0], 4) == floats[0]
    ints = [v for v in _walk(doc) if isinstance(v, int) and not isinstance(v, bool)]
    assert ints == []


def test_run_report_without_checks_has_no_analysis():
    doc = run_report(_outcome([[1, 2]], level="none"))
    assert doc["analysis"] is None
    assert doc["certify"]["verify"]["oracle"]["ok"] is True


def test_final_pivots_skip_zero_rows():
    outcome = _outcome([[2, 4], [1, 2]])
    assert final_pivots(outcome) == [{"row": "2", "col": "1", "value": "1"}]


def test_bench_report_aggregates(tmp_path):
    outcomes = [_outcome([[4], [6]], name="a"), _outcome([[1, 0], [0, 1]], name="b")]
    doc = bench_report(outcomes, 1.234)
    assert doc["runs"] == "2"
    assert doc["failed_runs"] == []
    assert doc["hard_violations"] == "0"
    assert doc["elapsed_seconds"] == "1.23"
    assert [e["name"] for e in doc["entries"]] == ["a", "b"]
    assert sum(int(c) for c in doc["empirical_c"]["histogram"].values()) == 2
    path = tmp_path / "out" / "bench.json"
    write_report(str(path), doc)
    assert json.loads(path.read_text(encoding="utf-8")) == doc
