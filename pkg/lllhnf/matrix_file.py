"""Plain-text matrix files.

    # comment lines and blank lines are ignored
    m n
    a11 a12 ... a1n
    ...
    am1 am2 ... amn

Entries are decimal integers of any size. Output is ASCII with LF newlines;
an m×0 matrix is written as m empty lines after the header.
"""

from __future__ import annotations

import os
from typing import Iterable

from .errors import MalformedMatrixError
from .exact_linalg import IntMatrix


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line))
    return out


def _parse_ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise MalformedMatrixError(f"line {lineno}: not a list of integers: {line!r}") from None


def _take_matrix(lines: list[tuple[int, str]], pos: int) -> tuple[IntMatrix, int]:
    if pos >= len(lines):
        raise MalformedMatrixError("missing 'm n' header")
    lineno, header = lines[pos]
    dims = _parse_ints(header, lineno)
    if len(dims) != 2 or dims[0] < 0 or dims[1] < 0:
        raise MalformedMatrixError(f"line {lineno}: header must be two non-negative integers, got {header!r}")
    m, n = dims
    pos += 1
    if n == 0:
        return IntMatrix.zeros(m, 0), pos
    rows: list[list[int]] = []
    for _ in range(m):
        if pos >= len(lines):
            raise MalformedMatrixError(f"expected {m} rows, found {len(rows)}")
        lineno, line = lines[pos]
        row = _parse_ints(line, lineno)
        if len(row) != n:
            raise MalformedMatrixError(f"line {lineno}: expected {n} entries, got {len(row)}")
        rows.append(row)
        pos += 1
    return IntMatrix.from_rows(rows, cols=n), pos


def parse_matrices(text: str) -> list[IntMatrix]:
    """All matrices in ``text``, one after another."""
    lines = _content_lines(text)
    out: list[IntMatrix] = []
    pos = 0
    while pos < len(lines):
        matrix, pos = _take_matrix(lines, pos)
        out.append(matrix)
    if not out:
        raise MalformedMatrixError("no matrix found")
    return out


def parse_matrix(text: str) -> IntMatrix:
    lines = _content_lines(text)
    matrix, pos = _take_matrix(lines, 0)
    if pos != len(lines):
        raise MalformedMatrixError(f"line {lines[pos][0]}: trailing content after the matrix")
    return matrix


def format_matrix(M: IntMatrix, comments: Iterable[str] = ()) -> str:
    parts = [f"# {c}\n" for c in comments]
    parts.append(f"{M.rows} {M.cols}\n")
    for i in range(M.rows):
        parts.append(" ".join(str(x) for x in M.row(i)) + "\n")
    return "".join(parts)


def read_matrix_file(path: str) -> IntMatrix:
    """Raises OSError for unreadable files, MalformedMatrixError for bad content."""
    with open(path, encoding="ascii", errors="strict") as fh:
        try:
            text = fh.read()
        except UnicodeDecodeError:
            raise MalformedMatrixError(f"{path}: not an ASCII file") from None
    return parse_matrix(text)


def write_matrix_file(path: str, M: IntMatrix, comments: Iterable[str] = ()) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_matrix(M, comments))
