"""Exact integer and rational dense linear algebra.

Python ``int`` is the big integer and ``fractions.Fraction`` the big rational
(always in lowest terms with a positive denominator). Nothing in here ever
touches a float.

Matrices are small frozen dataclasses holding a row-major tuple. Products go
through numpy object arrays so the entries stay Python ints/Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]
Vector = list[Fraction]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative dimensions {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        """Build from a list of rows. ``cols`` is only needed when there are no rows."""
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        if cols is not None and r and c != cols:
            raise ValueError(f"expected {cols} columns, got {c}")
        flat: list[int] = []
        for row in rows:
            if len(row) != c:
                raise ValueError(f"ragged rows: expected {c} entries, got {len(row)}")
            flat.extend(int(x) for x in row)
        return cls(r, c, tuple(flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def select_columns(self, cols: Sequence[int]) -> IntMatrix:
        """Keep only the given (0-based) columns, in the given order."""
        return IntMatrix.from_rows(
            [[self[i, j] for j in cols] for i in range(self.rows)], cols=len(cols)
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        prod = matmul(self.to_rows(), other.to_rows(), self.rows, self.cols, other.cols)
        return IntMatrix.from_rows(prod, cols=other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"negative dimensions {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> RatMatrix:
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        flat: list[Fraction] = []
        for row in rows:
            if len(row) != c:
                raise ValueError(f"ragged rows: expected {c} entries, got {len(row)}")
            flat.extend(Fraction(x) for x in row)
        return cls(r, c, tuple(flat))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )


# --------------------------------------------------------------------------- #
# Products
# --------------------------------------------------------------------------- #

def _object_array(rows: Sequence[Sequence[Scalar]], r: int, c: int) -> np.ndarray:
    flat = [x for row in rows for x in row]
    return np.array(flat, dtype=object).reshape(r, c)


def matmul(
    a: Sequence[Sequence[Scalar]],
    b: Sequence[Sequence[Scalar]],
    r: int,
    inner: int,
    c: int,
) -> list[list[Scalar]]:
    """Exact ``a @ b`` for an r×inner by inner×c pair of nested lists."""
    if inner == 0 or r == 0 or c == 0:
        return [[0] * c for _ in range(r)]
    prod = np.dot(_object_array(a, r, inner), _object_array(b, inner, c))
    return [[prod[i, j] for j in range(c)] for i in range(r)]


def dot(u: Iterable[Scalar], v: Iterable[Scalar]) -> Scalar:
    return sum((x * y for x, y in zip(u, v)), 0)


def vec_mat(v: Sequence[Scalar], M: Sequence[Sequence[Scalar]], cols: int) -> list[Scalar]:
    """Row vector times matrix."""
    out: list[Scalar] = [0] * cols
    for x, row in zip(v, M):
        if x:
            for j in range(cols):
                out[j] += x * row[j]
    return out


def gram_of(G: IntMatrix) -> IntMatrix:
    """G·Gᵀ: entry (i, j) is the Euclidean inner product of rows i and j."""
    rows = G.to_rows()
    prod = matmul(rows, G.transpose().to_rows(), G.rows, G.cols, G.rows)
    return IntMatrix.from_rows(prod, cols=G.rows)


def gram_rows(rows: Sequence[Sequence[Scalar]], form: Sequence[Sequence[Scalar]] | None = None) -> list[list[Scalar]]:
    """Gram matrix of ``rows`` under ``form`` (Euclidean when ``form`` is None)."""
    r = len(rows)
    if r == 0:
        return []
    c = len(rows[0])
    if form is None:
        transposed = [[rows[i][j] for i in range(r)] for j in range(c)]
        return matmul(rows, transposed, r, c, r)
    left = matmul(rows, form, r, c, c)
    transposed = [[rows[i][j] for i in range(r)] for j in range(c)]
    return matmul(left, transposed, r, c, r)


# --------------------------------------------------------------------------- #
# Determinant, rank, solving
# --------------------------------------------------------------------------- #

def det_exact(M: IntMatrix) -> int:
    """Determinant by Bareiss fraction-free elimination.

    Every division is exact; a remainder means the arithmetic went wrong
    and raises ArithmeticError.
    """
    if M.rows != M.cols:
        raise ValueError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                quo, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("inexact Bareiss division")
                a[i][j] = quo
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rational_echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], int, int]:
    """In-place Gaussian elimination. Returns (rows, rank, sign of row swaps)."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    sign = 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            sign = -sign
        p = rows[rank][col]
        for i in range(rank + 1, n_rows):
            f = rows[i][col]
            if f:
                f /= p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rows, rank, sign


def det_rational(M: Sequence[Sequence[Scalar]]) -> Fraction:
    """Determinant of a square rational matrix by Gaussian elimination."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return Fraction(1)
    rows, rank, sign = _rational_echelon([[Fraction(x) for x in row] for row in M])
    if rank < n:
        return Fraction(0)
    det = Fraction(sign)
    for i in range(n):
        det *= rows[i][i]
    return det


def rank_exact(M: IntMatrix | Sequence[Sequence[Scalar]]) -> int:
    rows = M.to_rows() if isinstance(M, IntMatrix) else M
    if not rows:
        return 0
    _, rank, _ = _rational_echelon([[Fraction(x) for x in row] for row in rows])
    return rank


def solve_rational(M: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> Vector:
    """Solve M·x = rhs for square nonsingular M. Singular M raises ValueError."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(M, rhs)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def project_onto_rowspan(rows: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> Vector:
    """Euclidean orthogonal projection of ``v`` onto the span of ``rows``.

    The rows must be independent; a singular Gram matrix raises ValueError.
    """
    if not rows:
        return [Fraction(0)] * len(v)
    gram = gram_rows(rows)
    rhs = [dot(r, v) for r in rows]
    try:
        coeffs = solve_rational(gram, rhs)
    except ValueError:
        raise ValueError("projection basis rows are linearly dependent") from None
    out = [Fraction(0)] * len(v)
    for c, r in zip(coeffs, rows):
        if c:
            for j, x in enumerate(r):
                out[j] += c * x
    return out


# --------------------------------------------------------------------------- #
# Gram–Schmidt from a Gram matrix
# --------------------------------------------------------------------------- #

def gram_schmidt_coefficients(gram: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """LDLᵀ of a symmetric Gram matrix.

    Returns ``(mu, norms)`` with ``mu[i][j]`` (j < i) the Gram–Schmidt
    coefficients and ``norms[i]`` the squared length of the i-th
    orthogonalised vector, all under whatever form produced ``gram``. A zero
    norm that would have to be divided by raises ZeroDivisionError.
    """
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms: list[Fraction] = []
    for i in range(n):
        for j in range(i):
            acc = Fraction(gram[i][j])
            for l in range(j):
                acc -= mu[j][l] * mu[i][l] * norms[l]
            if norms[j] == 0:
                raise ZeroDivisionError(f"Gram–Schmidt vector {j + 1} has zero norm")
            mu[i][j] = acc / norms[j]
        acc = Fraction(gram[i][i])
        for l in range(i):
            acc -= mu[i][l] * mu[i][l] * norms[l]
        norms.append(acc)
    return mu, norms


def orthogonalise(rows: Sequence[Sequence[Scalar]], mu: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Rebuild bᵢ* = bᵢ − Σ μᵢⱼ bⱼ* from precomputed coefficients."""
    bstar: list[Vector] = []
    for i, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for j in range(i):
            m = mu[i][j]
            if m:
                v = [x - m * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
    return bstar


def euclidean_lambda_d(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Euclidean (μ, D) of integer rows: D[i] is the i-th leading Gram minor, D[0] = 1."""
    mu, norms = gram_schmidt_coefficients(gram_rows(rows))
    D = [1]
    acc = Fraction(1)
    for nrm in norms:
        acc *= nrm
        if acc.denominator != 1:
            raise ArithmeticError("Gram minor is not an integer")
        D.append(int(acc))
    return mu, D


def is_perfect_square(x: Fraction | int) -> bool:
    x = Fraction(x)
    if x < 0 or x.denominator != 1:
        return False
    r = isqrt(x.numerator)
    return r * r == x.numerator
