"""Tests for the plain-text matrix format."""

from __future__ import annotations

import pytest

from lllhnf.errors import MalformedMatrixError
from lllhnf.exact_linalg import IntMatrix
from lllhnf.matrix_file import (
    format_matrix,
    parse_matrices,
    parse_matrix,
    read_matrix_file,
    write_matrix_file,
)


def test_parse_with_comments_and_blank_lines():
    text = "# gcd example\n\n2 1\n4\n  6  \n"
    assert parse_matrix(text).to_rows() == [[4], [6]]


def test_parse_big_integers():
    big = 10**40
    M = parse_matrix(f"1 2\n{big} -{big}\n")
    assert M.row(0) == (big, -big)


def test_parse_zero_width_matrix():
    M = parse_matrix("3 0\n")
    assert (M.rows, M.cols) == (3, 0)


def test_format_is_ascii_lf_and_reparses():
    M = IntMatrix.from_rows([[0, 0], [1, 2]])
    text = format_matrix(M, comments=["note"])
    assert text == "# note\n2 2\n0 0\n1 2\n"
    assert parse_matrix(text) == M


def test_parse_matrices_reads_a_transform_block():
    text = "2 1\n0\n2\n# transform\n2 2\n3 -2\n-1 1\n"
    A, b = parse_matrices(text)
    assert A.to_rows() == [[0], [2]]
    assert b.to_rows() == [[3, -2], [-1, 1]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# only a comment\n",
        "2\n1\n",
        "2 2\n1 2\n",
        "2 2\n1 2\n3\n",
        "1 2\n1 x\n",
        "-1 2\n",
        "1 1\n5\n6\n",
    ],
)
def test_malformed_input(text):
    with pytest.raises(MalformedMatrixError):
        parse_matrix(text)


def test_file_roundtrip(tmp_path):
    M = IntMatrix.from_rows([[1, -2, 3], [4, 5, -6]])
    path = tmp_path / "sub" / "m.txt"
    write_matrix_file(str(path), M, ["kind=random"])
    assert read_matrix_file(str(path)) == M
    assert path.read_bytes().startswith(b"# kind=random\n2 3\n")


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        read_matrix_file(str(tmp_path / "nope.txt"))


def test_non_ascii_file_is_malformed(tmp_path):
    path = tmp_path / "u.txt"
    path.write_bytes("1 1\né\n".encode("utf-8"))
    with pytest.raises(MalformedMatrixError):
        read_matrix_file(str(path))
