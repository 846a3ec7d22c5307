"""Tests for the mixed inner product and the checkpoint estimates built on it."""

from __future__ import annotations

from fractions import Fraction

import pytest

from lllhnf.engine import run_hnf
from lllhnf.exact_linalg import IntMatrix
from lllhnf.mixed import (
    big_c,
    build_mixed,
    check_gram_mix,
    check_mix2euc,
    check_mixsmall,
    check_pivot_block,
    check_preserved,
    gram_schmidt_mixed,
    hadamard_sq,
    pivot_columns,
    primitive_integer_vector,
)

F = Fraction


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols=cols)


G3 = M([[2, 4], [1, 2]])
B3 = M([[1, -2], [0, 1]])
A3 = M([[0, 0], [1, 2]])


def test_bound_helpers():
    assert hadamard_sq(2, 2) == 2**2 * 3**4
    assert big_c(1, 2) == 8**5


def test_pivot_columns_in_echelon_prefix():
    A = M([[0, 0, 0], [0, 0, 4], [0, 3, 1], [5, 0, 0]])
    assert pivot_columns(A, 4) == (1, 2, 3)
    assert pivot_columns(A, 2) == (3,)
    assert pivot_columns(A, 1) == ()


def test_pivot_columns_reject_broken_order():
    with pytest.raises(ValueError):
        pivot_columns(M([[1, 0], [0, 1]]), 2)
    with pytest.raises(ValueError):
        pivot_columns(M([[0, 1], [0, 0]]), 2)


def test_pivot_columns_non_strict_allows_any_order_of_distinct_leads():
    A = M([[1, 0], [0, 0], [0, 1]])
    assert pivot_columns(A, 3, strict=False) == (1, 2)
    with pytest.raises(ValueError):
        pivot_columns(M([[1, 0], [2, 0]]), 2, strict=False)


def test_gram_mix_of_rank_one_example():
    mix = build_mixed(G3, B3, A3, kmax=2)
    assert mix.pivot_cols == (1,)
    assert mix.iso_rows == (1,)
    assert mix.gram_mix.to_rows() == [[F(21, 5), F(8, 5)], [F(8, 5), F(9, 5)]]
    assert mix.gram_mix.is_symmetric()
    assert mix.det_gram_mix == 5


def test_mixed_gram_schmidt_of_rank_one_example():
    mix = build_mixed(G3, B3, A3, kmax=2)
    gs = gram_schmidt_mixed(B3, mix)
    assert gs.bstar[0] == (1, -2)
    assert gs.mu[1][0] == F(-2, 5)
    assert gs.norms == (5, 1)
    assert gs.diso == (5,)
    assert gs.d == (1,)
    assert gs.recomposes()


def test_checkpoint_checks_pass_on_rank_one_example():
    mix = build_mixed(G3, B3, A3, kmax=2)
    gs = gram_schmidt_mixed(B3, mix)
    verdicts = {**check_gram_mix(mix, 10), **check_pivot_block(A3, mix, gs, 10)}
    assert all(v.ok for v in verdicts.values()), verdicts
    assert check_mixsmall(gs, 2, 10).ok


def test_gram_mix_bound_uses_the_full_row_count():
    G = IntMatrix.zeros(3, 3)
    mix = build_mixed(G, IntMatrix.identity(3), G, kmax=1)
    verdict = check_gram_mix(mix, 2)["det_gram_mix_hadamard"]
    assert verdict.ok
    assert f"= {hadamard_sq(3, 2)}," in verdict.detail
    assert f"kmax-block bound {hadamard_sq(1, 2)}" in verdict.detail


def test_zero_matrix_gives_identity_form():
    G = IntMatrix.zeros(2, 2)
    mix = build_mixed(G, IntMatrix.identity(2), G, kmax=2)
    assert mix.gram_mix.to_rows() == [[1, 0], [0, 1]]
    assert mix.det_gram_mix == 1
    assert mix.isodim == 2


def test_full_rank_identity_form_is_the_bracket():
    G = M([[2, 1], [0, 3]])
    res = run_hnf(G)
    mix = build_mixed(G, res.b, res.A, kmax=2)
    assert mix.isodim == 0
    # with no isotropic rows (v, w)_mix = (vG, wG)
    v = [1, 1]
    assert mix.pair(v, v) == mix.bracket(v, v)
    gs = gram_schmidt_mixed(res.b, mix)
    assert gs.d[-1] == 36  # covolume² = det(G)²


def test_mix2euc_on_unit_vectors():
    mix = build_mixed(G3, B3, A3, kmax=2)
    for v in ([1, 0], [0, 1], [1, -2]):
        upper, lower = check_mix2euc(mix, v, 2, 10)
        assert upper.ok and lower.ok


def test_preserved_items_hold_on_engine_output():
    G = M([[3, 1, 4], [1, 5, 9], [2, 6, 5], [3, 5, 8]])
    res = run_hnf(G)
    for k in (1, 2, 4):
        verdicts = check_preserved(G, res.b, res.A, k, kmax=4)
        assert set(verdicts) == {"diso", "d", "norm_other", "norm_k", "mu_reduced", "mu_k", "mu_tail"}
        assert all(v.ok for v in verdicts.values()), verdicts


@pytest.mark.parametrize(
    "v, expected",
    [
        ([F(1, 2), F(-1, 3)], [3, -2]),
        ([F(0), F(4), F(6)], [0, 2, 3]),
        ([F(0), F(0)], [0, 0]),
        ([F(-5)], [-1]),
    ],
)
def test_primitive_integer_vector(v, expected):
    assert primitive_integer_vector(v) == expected
