"""Tests for the HNF engine: primitives, hand-traced runs and invariants."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lllhnf.certify import oracle_hnf, verify_result
from lllhnf.engine import (
    CheckLevel,
    EngineConfig,
    EngineState,
    EventKind,
    col1,
    parse_alpha,
    round_toward_zero_on_ties,
    run_hnf,
)
from lllhnf.errors import InvalidConfigError, OpBudgetExceeded
from lllhnf.exact_linalg import IntMatrix, det_exact, euclidean_lambda_d


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols=cols)


def matrices(max_m=4, max_n=4, bound=9):
    return st.tuples(
        st.integers(min_value=1, max_value=max_m), st.integers(min_value=1, max_value=max_n)
    ).flatmap(
        lambda mn: st.lists(
            st.lists(st.integers(-bound, bound), min_size=mn[1], max_size=mn[1]),
            min_size=mn[0],
            max_size=mn[0],
        )
    )


# -- configuration -------------------------------------------------------------

def test_parse_alpha_accepts_fraction_text():
    assert parse_alpha("3/4") == Fraction(3, 4)
    assert parse_alpha("1") == 1


@pytest.mark.parametrize("text", ["1/4", "5/4", "0", "abc", "1/0"])
def test_parse_alpha_rejects_out_of_range_or_garbage(text):
    with pytest.raises(InvalidConfigError):
        parse_alpha(text)


def test_engine_config_rejects_unknown_check_level():
    with pytest.raises(InvalidConfigError):
        EngineConfig(check_level="sometimes")


def test_engine_config_coerces_level_string():
    assert EngineConfig(check_level="full").check_level is CheckLevel.FULL


# -- primitives -------------------------------------------------------------------

def test_col1_of_zero_row_is_n_plus_one():
    A = M([[0, 0, 5], [0, 0, 0]])
    assert col1(A, 1) == 3
    assert col1(A, 2) == 4


@pytest.mark.parametrize(
    "num, den, expected",
    [(1, 2, 0), (-1, 2, 0), (3, 2, 1), (-3, 2, -1), (5, 2, 2), (5, 4, 1), (7, 4, 2), (-7, 4, -2), (0, 5, 0)],
)
def test_rounding_sends_halves_toward_zero(num, den, expected):
    assert round_toward_zero_on_ties(num, den) == expected


def test_reduce2_on_pivot_rows_is_a_floor_division_step():
    st_ = EngineState(M([[4], [6]]))
    red = st_.reduce2(2, 1)
    assert red.q == 1
    assert st_.A == [[4], [2]]
    assert st_.b == [[1, 0], [-1, 1]]
    assert st_.lam[2][1] == -1


def test_reduce2_negates_negative_pivot_first():
    st_ = EngineState(M([[-3], [7]]))
    red = st_.reduce2(2, 1)
    assert red.negated
    assert st_.A == [[3], [1]]
    assert st_.det_sign == -1


def test_swap_wanted_on_pivot_collision():
    assert EngineState(M([[1], [1]])).swap_wanted(2, Fraction(3, 4))


def test_swap_not_wanted_when_leading_columns_already_decrease():
    assert not EngineState(M([[0, 1], [1, 0]])).swap_wanted(2, Fraction(3, 4))


def test_lovasz_test_on_identity_zero_rows():
    st_ = EngineState(IntMatrix.zeros(3, 1))
    assert not st_.swap_wanted(2, Fraction(3, 4))


def test_swap2_keeps_lambda_d_consistent():
    st_ = EngineState(M([[4], [6]]))
    st_.reduce2(2, 1)
    st_.swap2(2)
    mu, D = euclidean_lambda_d(st_.b)
    assert st_.D == D
    assert st_.lam[2][1] == mu[1][0] * D[1]
    assert st_.det_sign == -1


# -- hand-traced runs -------------------------------------------------------------

def test_gcd_pair():
    G = M([[4], [6]])
    res = run_hnf(G)
    assert res.A.to_rows() == [[0], [2]]
    assert res.b.to_rows() == [[3, -2], [-1, 1]]
    assert (res.b @ G) == res.A
    assert abs(det_exact(res.b)) == 1
    assert res.metrics.swaps == 2
    assert res.metrics.reduce2_applied == 2


def test_identity_needs_one_echelon_swap():
    res = run_hnf(IntMatrix.identity(2))
    assert res.A.to_rows() == [[0, 1], [1, 0]]
    assert res.metrics.swaps == 1
    assert res.metrics.reduce2_applied == 0
    assert res.metrics.lovasz_swaps == 0


def test_rank_one_square_has_isotropic_first_row():
    G = M([[2, 4], [1, 2]])
    res = run_hnf(G)
    assert res.A.to_rows() == [[0, 0], [1, 2]]
    assert res.b.to_rows() == [[1, -2], [0, 1]]
    first = res.b.row(0)
    assert all(sum(first[i] * G[i, j] for i in range(2)) == 0 for j in range(2))


def test_zero_matrix_keeps_identity_transform():
    res = run_hnf(IntMatrix.zeros(2, 2))
    assert res.A.is_zero()
    assert res.b == IntMatrix.identity(2)
    assert res.metrics.swaps == 0


def test_empty_and_single_row_inputs():
    assert run_hnf(IntMatrix.zeros(0, 3)).A.rows == 0
    res = run_hnf(M([[0, -3, 6]]))
    assert res.A.to_rows() == [[0, 3, -6]]
    assert res.b.to_rows() == [[-1]]


def test_zero_width_input():
    res = run_hnf(IntMatrix.zeros(3, 0))
    assert res.A.cols == 0
    assert abs(det_exact(res.b)) == 1


# -- events ------------------------------------------------------------------------

def test_event_order_for_gcd_pair():
    res = run_hnf(M([[4], [6]]), EngineConfig(emit_trace=True))
    kinds = [e.kind for e in res.trace]
    assert kinds == [
        EventKind.KMAX_ADVANCE,
        EventKind.CHECKPOINT,
        EventKind.REDUCE,
        EventKind.SWAP,
        EventKind.REDUCE,
        EventKind.NEW_ISOTROPIC,
        EventKind.SWAP,
        EventKind.K_ADVANCE,
        EventKind.KMAX_ADVANCE,
        EventKind.CHECKPOINT,
        EventKind.CHECKPOINT,
        EventKind.DONE,
    ]


def test_event_order_for_identity():
    res = run_hnf(IntMatrix.identity(2), EngineConfig(emit_trace=True))
    kinds = [e.kind for e in res.trace]
    assert kinds == [
        EventKind.KMAX_ADVANCE,
        EventKind.CHECKPOINT,
        EventKind.NEW_PIVOT,
        EventKind.SWAP,
        EventKind.K_ADVANCE,
        EventKind.KMAX_ADVANCE,
        EventKind.CHECKPOINT,
        EventKind.CHECKPOINT,
        EventKind.DONE,
    ]


def test_no_snapshots_at_check_level_none():
    res = run_hnf(M([[4], [6]]), EngineConfig(check_level="none", emit_trace=True))
    assert all(e.snapshot is None for e in res.trace)


def test_structural_events_carry_snapshots_at_checkpoint_level():
    res = run_hnf(M([[4], [6]]), EngineConfig(emit_trace=True))
    for e in res.trace:
        if e.kind in (EventKind.CHECKPOINT, EventKind.NEW_ISOTROPIC, EventKind.DONE):
            assert e.snapshot is not None
        if e.kind is EventKind.REDUCE:
            assert e.snapshot is None


def test_kmax_timeline_is_non_decreasing():
    res = run_hnf(M([[3, 1, 4], [1, 5, 9], [2, 6, 5], [3, 5, 8]]))
    ks = [k for _, k in res.metrics.kmax_timeline]
    assert ks == sorted(ks)
    assert ks[-1] == 4


def test_op_budget_is_enforced():
    with pytest.raises(OpBudgetExceeded):
        run_hnf(M([[13], [21], [34]]), EngineConfig(op_budget=2))


# -- invariants -------------------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(matrices())
def test_output_matches_oracle_and_is_unimodular(rows):
    G = IntMatrix.from_rows(rows)
    res = run_hnf(G, EngineConfig(check_level="none"))
    report = verify_result(G, res.b, res.A)
    assert report.ok, report.failures()
    assert res.A == oracle_hnf(G)
    assert det_exact(res.b) == res.det_sign


@settings(max_examples=30, deadline=None)
@given(matrices(max_m=3, max_n=3))
def test_full_checks_never_change_the_output(rows):
    G = IntMatrix.from_rows(rows)
    quiet = run_hnf(G, EngineConfig(check_level="none"))
    loud = run_hnf(G, EngineConfig(check_level="full"))
    assert quiet.A == loud.A
    assert quiet.b == loud.b


@settings(max_examples=40, deadline=None)
@given(matrices(max_m=3, max_n=3, bound=5), st.sampled_from(["1", "99/100", "1/3"]))
def test_alpha_only_changes_b_not_a(rows, alpha):
    G = IntMatrix.from_rows(rows)
    default = run_hnf(G, EngineConfig(check_level="none"))
    other = run_hnf(G, EngineConfig(alpha=parse_alpha(alpha), check_level="none"))
    assert default.A == other.A
    assert (other.b @ G) == other.A
