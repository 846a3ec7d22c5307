"""Tests for the bench thread pool."""

from __future__ import annotations

from lllhnf.engine import CheckLevel, EngineConfig
from lllhnf.exact_linalg import IntMatrix
from lllhnf.workers import BenchWorker


def _entries():
    return [
        ("a", IntMatrix.from_rows([[4], [6]])),
        ("b", IntMatrix.identity(3)),
        ("c", IntMatrix.from_rows([[2, 4], [1, 2]])),
        ("d", IntMatrix.zeros(6, 2)),
    ]


def test_outcomes_come_back_in_input_order():
    seen = []
    worker = BenchWorker(_entries(), max_workers=3, progress=lambda name, _o: seen.append(name))
    outcomes = worker.run()
    assert [o.name for o in outcomes] == ["a", "b", "c", "d"]
    assert sorted(seen) == ["a", "b", "c", "d"]
    assert all(o.ok for o in outcomes)


def test_full_level_only_for_small_inputs():
    worker = BenchWorker(_entries(), EngineConfig(), full_max_m=3)
    levels = {o.name: o.config.check_level for o in worker.run()}
    assert levels["a"] is CheckLevel.FULL
    assert levels["b"] is CheckLevel.FULL
    assert levels["d"] is CheckLevel.CHECKPOINTS


def test_full_max_m_is_capped():
    assert BenchWorker([], full_max_m=50).full_max_m == 5


def test_empty_entry_list():
    assert BenchWorker([]).run() == []
