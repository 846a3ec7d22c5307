"""Tests for the engine + analysis + certification pipeline."""

from __future__ import annotations

from lllhnf.engine import EngineConfig
from lllhnf.exact_linalg import IntMatrix
from lllhnf.instance import ProblemInstance
from lllhnf.pipeline import run_pipeline


def test_instance_derived_quantities():
    inst = ProblemInstance(IntMatrix.from_rows([[1, 2], [3, 4]]))
    assert inst.gram.to_rows() == [[5, 11], [11, 25]]
    assert inst.B == 25
    assert inst.bound_B == 25
    assert inst.rank == 2


def test_bound_b_never_below_two():
    inst = ProblemInstance(IntMatrix.zeros(2, 2))
    assert inst.B == 0
    assert inst.bound_B == 2
    assert inst.rank == 0


def test_gcd_check_runs_only_for_single_columns():
    one = run_pipeline(ProblemInstance(IntMatrix.from_rows([[12], [18]])))
    two = run_pipeline(ProblemInstance(IntMatrix.from_rows([[1, 2]])))
    assert one.gcd is not None and one.gcd.ok
    assert two.gcd is None


def test_engine_failure_becomes_a_hard_violation():
    instance = ProblemInstance(IntMatrix.from_rows([[13], [21], [34]]))
    outcome = run_pipeline(instance, EngineConfig(op_budget=2))
    assert outcome.result is None
    assert not outcome.ok
    assert outcome.hard_violations[0].startswith("OpBudgetExceeded")


def test_certification_can_be_skipped():
    outcome = run_pipeline(ProblemInstance(IntMatrix.from_rows([[4], [6]])), certify_output=False)
    assert outcome.verify is None
    assert outcome.conditions is None
    assert outcome.ok
