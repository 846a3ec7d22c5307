"""Tests for the reference HNF, output verification and output conditions."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lllhnf.certify import (
    check_gcd_vector,
    check_output_conditions,
    is_upside_down_hnf,
    oracle_hnf,
    pivot_restriction,
    two_regime_gram_schmidt,
    verify_result,
    xgcd,
)
from lllhnf.engine import run_hnf
from lllhnf.exact_linalg import IntMatrix, euclidean_lambda_d, vec_mat


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols=cols)


@pytest.mark.parametrize("a, b", [(4, 6), (-4, 6), (0, 5), (7, 0), (-3, -9), (0, 0)])
def test_xgcd_bezout(a, b):
    x, y, g = xgcd(a, b)
    assert x * a + y * b == g
    assert g >= 0


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[4], [6]], [[0], [2]]),
        ([[1, 0], [0, 1]], [[0, 1], [1, 0]]),
        ([[2, 4], [1, 2]], [[0, 0], [1, 2]]),
        ([[0, 0], [0, 0]], [[0, 0], [0, 0]]),
        ([[2, 1], [0, 3]], [[0, 3], [2, 1]]),
    ],
)
def test_oracle_hnf_examples(rows, expected):
    assert oracle_hnf(M(rows)).to_rows() == expected


def test_oracle_reduces_entries_below_pivot():
    # lattice spanned by (2, 5) and (0, 3): pivot 3 in column 2, entry 5 reduced to 2
    A = oracle_hnf(M([[2, 5], [0, 3]]))
    assert A.to_rows() == [[0, 3], [2, 2]]
    assert is_upside_down_hnf(A)


def test_is_upside_down_hnf_shapes():
    assert is_upside_down_hnf(M([[0, 0], [0, 1], [1, 0]]))
    assert not is_upside_down_hnf(M([[0, 1], [0, 0]]))     # zero row below a pivot row
    assert not is_upside_down_hnf(M([[1, 0], [0, 1]]))     # leading columns increase
    assert not is_upside_down_hnf(M([[0, -1], [1, 0]]))    # negative pivot
    assert not is_upside_down_hnf(M([[0, 2], [1, 3]]))     # 3 not reduced mod 2
    assert is_upside_down_hnf(M([[0, 2], [1, 1]]))


def test_verify_result_accepts_engine_output():
    G = M([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    res = run_hnf(G)
    report = verify_result(G, res.b, res.A)
    assert report.ok
    assert report.failures() == []


def test_verify_result_flags_a_tampered_transform():
    G = M([[4], [6]])
    b = M([[3, -2], [-1, 2]])
    report = verify_result(G, b, M([[0], [2]]))
    assert not report.product.ok
    assert not report.unimodular.ok
    assert report.canonical.ok
    assert len(report.failures()) == 2


def test_verify_result_rejects_bad_shapes():
    with pytest.raises(ValueError):
        verify_result(M([[1, 2]]), IntMatrix.identity(2), M([[1, 2]]))


def test_output_conditions_rank_one_example():
    G = M([[2, 4], [1, 2]])
    report = check_output_conditions(G, M([[1, -2], [0, 1]]))
    assert report.isodim == 1
    assert report.rank == 1
    assert report.ok
    assert report.witness is None


def test_output_conditions_catch_an_unreduced_cross_term():
    # same lattice, second row not size-reduced against the isotropic row
    G = M([[2, 4], [1, 2]])
    report = check_output_conditions(G, M([[1, -2], [3, -5]]))
    assert report.isotropic_prefix.ok
    assert not report.size_reduced_cross.ok
    assert not report.ok
    assert report.witness


def test_output_conditions_need_unimodular_b():
    with pytest.raises(ValueError):
        check_output_conditions(M([[1], [1]]), M([[2, 0], [0, 1]]))


def test_output_conditions_hold_on_engine_output_for_zero_rows():
    G = M([[1, 2, 3], [2, 4, 6], [0, 0, 0], [1, 1, 1]])
    res = run_hnf(G)
    report = check_output_conditions(G, res.b, Fraction(3, 4))
    assert report.ok, report.witness
    assert report.isodim == 2


def test_isotropic_block_mu_is_the_euclidean_gram_schmidt_coefficient():
    # rank one with five isotropic rows: earlier basis coefficients differ from μ
    G = M([[10], [7], [0], [7], [-6], [3]])
    res = run_hnf(G)
    rows = res.b.to_rows()
    G_piv = pivot_restriction(G, res.A)
    images = [vec_mat(r, G_piv, len(G_piv[0])) for r in rows]
    _, mu = two_regime_gram_schmidt(rows, images, 5)
    expected, _ = euclidean_lambda_d(rows[:5])
    for i in range(1, 5):
        assert mu[i] == expected[i][:i]
    report = check_output_conditions(G, res.b)
    assert report.isodim == 5
    assert report.reduced_isotropic_block.ok, report.witness
    assert report.ok


def _matrices(max_m=5, max_n=3, bound=12):
    return st.tuples(
        st.integers(min_value=1, max_value=max_m), st.integers(min_value=1, max_value=max_n)
    ).flatmap(
        lambda mn: st.lists(
            st.lists(st.integers(-bound, bound), min_size=mn[1], max_size=mn[1]),
            min_size=mn[0],
            max_size=mn[0],
        )
    )


@settings(max_examples=60, deadline=None)
@given(_matrices())
def test_output_conditions_hold_on_random_engine_output(rows):
    G = M(rows)
    res = run_hnf(G)
    report = check_output_conditions(G, res.b)
    assert report.ok, report.witness


def test_gcd_vector_check():
    G = M([[12], [18], [-30]])
    res = run_hnf(G)
    assert check_gcd_vector([12, 18, -30], res.A).ok
    assert not check_gcd_vector([12, 18, -30], M([[0], [6], [0]])).ok
    assert check_gcd_vector([0], M([[0]])).ok
