"""Tests for bit lengths, the bit-length line and the run counters."""

from __future__ import annotations

import math

import pytest

from lllhnf.engine import run_hnf
from lllhnf.exact_linalg import IntMatrix
from lllhnf.metrics import RunMetrics, bit_bound_holds, bit_bound_value, bit_length


@pytest.mark.parametrize("x, bits", [(0, 0), (1, 1), (-1, 1), (255, 8), (256, 9), (-(2**100), 101)])
def test_bit_length(x, bits):
    assert bit_length(x) == bits


def test_bit_bound_is_exact_at_the_edge():
    # m = 1, B = 2: line is 3·log2(8) + 16 = 25 bits
    assert bit_bound_holds(25, 1, 2)
    assert not bit_bound_holds(26, 1, 2)
    assert bit_bound_value(1, 2) == pytest.approx(25.0)


def test_bit_bound_with_no_rows_is_the_slack():
    assert bit_bound_value(0, 2) == 16.0
    assert bit_bound_holds(16, 0, 2)


def test_derived_properties():
    mt = RunMetrics(m=2, n=3, B=8, bound_B=8, max_bits_A=4, max_bits_b=6, reduce2_applied=3, swaps=2, minus=1)
    assert mt.max_bits == 6
    assert mt.row_operations == 6
    assert mt.empirical_c == pytest.approx(6 / (2 * math.log2(16)))
    assert mt.op_ratio == pytest.approx(6 / (5**4 * 4))


def test_empty_run_metrics_are_zero():
    mt = RunMetrics(m=0, n=0, B=0, bound_B=2)
    assert mt.empirical_c == 0.0
    assert mt.op_ratio == 0.0


def test_engine_run_fills_the_counters():
    res = run_hnf(IntMatrix.from_rows([[4], [6]]))
    mt = res.metrics
    assert (mt.m, mt.n, mt.B) == (2, 1, 36)
    assert mt.swaps == 2
    assert mt.reduce2_applied == 2
    assert mt.checkpoints == 2
    assert mt.kmax_timeline == [(0, 1), (mt.kmax_timeline[1][0], 2)]
    # D reaches 13 = |(3, -2)|², 4 bits
    assert mt.max_bits_D == 4
    assert mt.max_bits_b == 2
    assert mt.bit_bound_ok
