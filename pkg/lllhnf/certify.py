"""Independent correctness checks for engine output.

``oracle_hnf`` recomputes the canonical form by plain extended-gcd row
elimination, with no λ/D bookkeeping, so agreement with the engine is real
evidence. ``check_output_conditions`` restates the four structural
conditions on the final transformation matrix in exact rationals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import Verdict
from .exact_linalg import IntMatrix, det_exact, dot, rank_exact, solve_rational, vec_mat

log = logging.getLogger(__name__)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(x, y, g) with x·a + y·b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _leading(row: Sequence[int]) -> int | None:
    """0-based leading column, or None for a zero row."""
    for j, x in enumerate(row):
        if x:
            return j
    return None


def oracle_hnf(G: IntMatrix) -> IntMatrix:
    """Canonical upside-down HNF of the row lattice of G.

    Builds the classical form (pivots descending to the right, entries above
    each pivot in [0, pivot), zero rows last) and then reverses the row order.
    """
    m, n = G.rows, G.cols
    rows = G.to_rows()
    r = 0
    for col in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            bb = rows[i][col]
            if not bb:
                continue
            a = rows[r][col]
            x, y, g = xgcd(a, bb)
            top, other = rows[r], rows[i]
            rows[r] = [x * u + y * v for u, v in zip(top, other)]
            rows[i] = [(-bb // g) * u + (a // g) * v for u, v in zip(top, other)]
        p = rows[r][col]
        if p == 0:
            continue
        if p < 0:
            rows[r] = [-u for u in rows[r]]
            p = -p
        for i in range(r):
            q = rows[i][col] // p
            if q:
                rows[i] = [u - q * v for u, v in zip(rows[i], rows[r])]
        r += 1
    rows.reverse()
    return IntMatrix.from_rows(rows, cols=n)


def is_upside_down_hnf(A: IntMatrix) -> bool:
    m, n = A.rows, A.cols
    seen_nonzero = False
    prev_lead = n
    for i in range(m):
        row = A.row(i)
        lead = _leading(row)
        if lead is None:
            if seen_nonzero:
                return False
            continue
        seen_nonzero = True
        if lead >= prev_lead:
            return False
        prev_lead = lead
        p = row[lead]
        if p <= 0:
            return False
        if any(A[k, lead] != 0 for k in range(i)):
            return False
        if any(not 0 <= A[k, lead] < p for k in range(i + 1, m)):
            return False
    return True


@dataclass(frozen=True)
class VerifyReport:
    product: Verdict
    unimodular: Verdict
    canonical: Verdict
    oracle: Verdict

    @property
    def ok(self) -> bool:
        return all(v.ok for v in (self.product, self.unimodular, self.canonical, self.oracle))

    def failures(self) -> list[str]:
        named = (
            ("b·G == A", self.product),
            ("|det b| == 1", self.unimodular),
            ("upside-down HNF", self.canonical),
            ("matches oracle", self.oracle),
        )
        return [f"{name}: {v.detail}" for name, v in named if not v.ok]


def verify_result(G: IntMatrix, b: IntMatrix, A: IntMatrix) -> VerifyReport:
    if b.rows != b.cols or b.cols != G.rows or A.rows != G.rows or A.cols != G.cols:
        raise ValueError(
            f"inconsistent shapes: G {G.rows}x{G.cols}, b {b.rows}x{b.cols}, A {A.rows}x{A.cols}"
        )
    product = (b @ G) == A
    det = det_exact(b)
    canonical = is_upside_down_hnf(A)
    expected = oracle_hnf(G)
    return VerifyReport(
        product=Verdict(product, "" if product else "b·G differs from A"),
        unimodular=Verdict(abs(det) == 1, f"det(b) = {det}"),
        canonical=Verdict(canonical, "" if canonical else "A is not in upside-down HNF"),
        oracle=Verdict(
            expected == A, "" if expected == A else f"oracle gives {expected.to_rows()}"
        ),
    )


# --------------------------------------------------------------------------- #
# Output conditions on b
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class OutputConditionReport:
    isotropic_prefix: Verdict
    reduced_isotropic_block: Verdict
    pivot_block: Verdict
    size_reduced_cross: Verdict
    isodim: int
    rank: int
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return all(
            v.ok for v in (
                self.isotropic_prefix,
                self.reduced_isotropic_block,
                self.pivot_block,
                self.size_reduced_cross,
            )
        )


def pivot_restriction(G: IntMatrix, A: IntMatrix) -> list[list[int]]:
    """Columns of G that carry the leading entry of some nonzero row of A."""
    cols = sorted({j for j in (_leading(A.row(i)) for i in range(A.rows)) if j is not None})
    return G.select_columns(cols).to_rows()


def two_regime_gram_schmidt(
    b_rows: list[list[int]], images: list[list[int]], isodim: int
) -> tuple[list[list[Fraction]], list[list[Fraction]]] | None:
    """b_i* orthogonal to b_j (j <= isodim) in the Euclidean sense and to b_j
    (isodim < j < i) in the sense ⟨v, w⟩ = (vG', wG').

    Returns (bstar, mu) with mu[i][j] = ⟨b_i, b_j*⟩ / ⟨b_j*, b_j*⟩ taken in
    the regime of j, or None if some system is singular.
    """
    m = len(b_rows)
    bstar: list[list[Fraction]] = []
    star_images: list[list[Fraction]] = []
    mu: list[list[Fraction]] = []
    for i in range(m):
        if i:
            system: list[list[int]] = []
            rhs: list[int] = []
            for j in range(i):
                if j < isodim:
                    system.append([dot(b_rows[l], b_rows[j]) for l in range(i)])
                    rhs.append(dot(b_rows[i], b_rows[j]))
                else:
                    system.append([dot(images[l], images[j]) for l in range(i)])
                    rhs.append(dot(images[i], images[j]))
            try:
                c = solve_rational(system, rhs)
            except ValueError:
                return None
        else:
            c = []
        v = [Fraction(x) for x in b_rows[i]]
        img = [Fraction(x) for x in images[i]]
        for l, cl in enumerate(c):
            if cl:
                v = [x - cl * y for x, y in zip(v, b_rows[l])]
                img = [x - cl * y for x, y in zip(img, images[l])]
        row_mu: list[Fraction] = []
        for j in range(i):
            if j < isodim:
                num, den = dot(b_rows[i], bstar[j]), dot(bstar[j], bstar[j])
            else:
                num, den = dot(images[i], star_images[j]), dot(star_images[j], star_images[j])
            if not den:
                return None
            row_mu.append(Fraction(num) / den)
        bstar.append(v)
        star_images.append(img)
        mu.append(row_mu)
    return bstar, mu


def check_output_conditions(
    G: IntMatrix, b: IntMatrix, alpha: Fraction = Fraction(3, 4)
) -> OutputConditionReport:
    """Exact check of the four output conditions on the final transformation b.

    Raises ValueError when b is not unimodular.
    """
    if abs(det_exact(b)) != 1:
        raise ValueError("b is not unimodular")
    m = b.rows
    b_rows = b.to_rows()
    A = b @ G
    G_piv = pivot_restriction(G, A)
    width = len(G_piv[0]) if G_piv else 0
    images = [vec_mat(row, G_piv, width) for row in b_rows]
    isotropic = [not any(img) for img in images]
    isodim = sum(isotropic)
    rank = rank_exact(G)

    prefix_ok = all(isotropic[:isodim])
    prefix = Verdict(
        prefix_ok,
        "" if prefix_ok else f"isotropic rows are not rows 1..{isodim}",
    )

    gs = two_regime_gram_schmidt(b_rows, images, isodim)
    if gs is None:
        fail = Verdict.failed("Gram–Schmidt system is singular")
        return OutputConditionReport(prefix, fail, fail, fail, isodim, rank, "singular")
    bstar, mu = gs
    witness: str | None = None

    reduced = Verdict.passed()
    for i in range(1, isodim):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                reduced = Verdict.failed(f"|μ[{i + 1}][{j + 1}]| = {abs(mu[i][j])} > 1/2")
                break
        if not reduced.ok:
            break
        mu_last = mu[i][i - 1]
        lhs = dot(bstar[i], bstar[i])
        rhs = (alpha - mu_last * mu_last) * dot(bstar[i - 1], bstar[i - 1])
        if lhs < rhs:
            reduced = Verdict.failed(f"Lovász condition fails at row {i + 1}: {lhs} < {rhs}")
            break
    if not reduced.ok:
        witness = witness or reduced.detail

    star_images = [vec_mat(v, G_piv, width) for v in bstar]
    pivot = Verdict.passed()
    if rank_exact(images[isodim:]) != m - isodim:
        pivot = Verdict.failed("pivot rows are linearly dependent under G'")
    else:
        for i in range(isodim, m):
            own = dot(star_images[i], images[i])
            for j in range(i + 1, m):
                cross = dot(star_images[i], images[j])
                if abs(cross) > own:
                    pivot = Verdict.failed(
                        f"|⟨b*[{i + 1}], b[{j + 1}]⟩| = {abs(cross)} > {own}"
                    )
                    break
            if not pivot.ok:
                break
    if not pivot.ok:
        witness = witness or pivot.detail

    cross_ok = Verdict.passed()
    for i in range(isodim):
        own = dot(bstar[i], b_rows[i])
        for j in range(i + 1, m):
            val = dot(bstar[i], b_rows[j])
            if 2 * abs(val) > own:
                cross_ok = Verdict.failed(
                    f"|(b*[{i + 1}], b[{j + 1}])| = {abs(val)} > {own}/2"
                )
                break
        if not cross_ok.ok:
            break
    if not cross_ok.ok:
        witness = witness or cross_ok.detail

    report = OutputConditionReport(prefix, reduced, pivot, cross_ok, isodim, rank, witness)
    if not report.ok:
        log.error("output conditions violated: %s", witness or prefix.detail)
    return report


def check_gcd_vector(values: Sequence[int], A: IntMatrix) -> Verdict:
    """A single-column input must end with gcd(values) in the last row and zeros above."""
    g = 0
    for v in values:
        g = gcd(g, v)
    column = list(A.column(0)) if A.cols else []
    expected = [0] * (len(values) - 1) + [g] if values else []
    if column != expected:
        return Verdict.failed(f"expected column {expected}, got {column}")
    return Verdict.passed(f"gcd = {g}")
