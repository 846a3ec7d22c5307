"""Mixed inner product snapshots and the bound checks stated against them.

At a checkpoint the rows 1..kmax of A are in echelon order. Their leading
columns are the pivot columns; G' keeps only those columns of G and defines
⟨v, w⟩ = (vG', wG'). The zero rows of A among 1..kmax are isotropic rows of
b. The mixed form is

    (v, w)_mix = (pr v, pr w) + ⟨v, w⟩

with pr the Euclidean projection onto the span of the isotropic rows. It is
built here on all of Rᵐ; ``gram_mix`` is its top-left kmax block.

Every bound with a square root in it is compared in squared form. B means
max(B, 2) throughout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from .errors import Verdict
from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    det_rational,
    dot,
    gram_rows,
    gram_schmidt_coefficients,
    is_perfect_square,
    orthogonalise,
    project_onto_rowspan,
    vec_mat,
)
from .engine import leading_column
from .instance import ProblemInstance

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------- #
# Bound constants (squared where the statement has a square root)
# --------------------------------------------------------------------------- #

def hadamard_sq(m: int, bound_B: int) -> int:
    """((√m·(B+1))^m)²."""
    return m**m * (bound_B + 1) ** (2 * m)


def big_c(m: int, bound_B: int) -> int:
    """C = (4·m·B)^(5m)."""
    return (4 * m * bound_B) ** (5 * m)


# --------------------------------------------------------------------------- #
# The mixed form
# --------------------------------------------------------------------------- #

def pivot_columns(A: IntMatrix, kmax: int, strict: bool = True) -> tuple[int, ...]:
    """Leading columns (1-based, ascending) of the nonzero rows among rows 1..kmax.

    With ``strict`` the rows must be in echelon order (zero rows first, then
    strictly decreasing leading columns); otherwise only distinct leading
    columns are required. Anything else raises ValueError.
    """
    n = A.cols
    leads: list[int] = []
    seen_nonzero = False
    for i in range(kmax):
        lead = leading_column(A.row(i), n)
        if lead > n:
            if strict and seen_nonzero:
                raise ValueError(f"row {i + 1} is zero but a nonzero row sits above it")
            continue
        if strict and leads and lead >= leads[-1]:
            raise ValueError(f"leading column of row {i + 1} does not decrease")
        if lead in leads:
            raise ValueError(f"leading column {lead} repeats at row {i + 1}")
        leads.append(lead)
        seen_nonzero = True
    return tuple(sorted(leads))


@dataclass(frozen=True)
class MixedInnerProduct:
    m: int
    kmax: int
    pivot_cols: tuple[int, ...]
    G_restricted: IntMatrix
    iso_rows: tuple[int, ...]  # 1-based indices among 1..kmax
    iso_basis: tuple[tuple[int, ...], ...]
    gram_ext: tuple[tuple[Fraction, ...], ...]  # the form on all of Rᵐ

    @property
    def isodim(self) -> int:
        return len(self.iso_rows)

    @cached_property
    def gram_mix(self) -> RatMatrix:
        k = self.kmax
        return RatMatrix.from_rows([list(self.gram_ext[i][:k]) for i in range(k)], cols=k)

    @cached_property
    def det_gram_mix(self) -> Fraction:
        return det_rational(self.gram_mix.to_rows())

    def image(self, v: Sequence[Fraction | int]) -> list[Fraction | int]:
        """v·G'."""
        return vec_mat(v, self.G_restricted.to_rows(), self.G_restricted.cols)

    def bracket(self, v: Sequence[Fraction | int], w: Sequence[Fraction | int]) -> Fraction:
        """⟨v, w⟩ = (vG', wG')."""
        return Fraction(dot(self.image(v), self.image(w)))

    def apply(self, v: Sequence[Fraction | int]) -> list[Fraction]:
        """v·gram_ext, so that (v, w)_mix = dot(apply(v), w)."""
        return vec_mat(v, self.gram_ext, self.m)

    def pair(self, v: Sequence[Fraction | int], w: Sequence[Fraction | int]) -> Fraction:
        return Fraction(dot(self.apply(v), w))


def build_mixed(
    G: IntMatrix, b: IntMatrix, A: IntMatrix, kmax: int, strict: bool = True
) -> MixedInnerProduct:
    cols = pivot_columns(A, kmax, strict)
    G_r = G.select_columns([c - 1 for c in cols])
    iso_rows = tuple(i + 1 for i in range(kmax) if not any(A.row(i)))
    iso_basis = tuple(b.row(i - 1) for i in iso_rows)
    m = G.rows
    gr = G_r.to_rows()
    bracket = gram_rows(gr) if gr and G_r.cols else [[0] * m for _ in range(m)]
    ext: list[tuple[Fraction, ...]] = []
    for i in range(m):
        e_i = [1 if j == i else 0 for j in range(m)]
        proj = project_onto_rowspan(iso_basis, e_i)
        ext.append(tuple(proj[j] + bracket[i][j] for j in range(m)))
    return MixedInnerProduct(
        m=m,
        kmax=kmax,
        pivot_cols=cols,
        G_restricted=G_r,
        iso_rows=iso_rows,
        iso_basis=iso_basis,
        gram_ext=tuple(ext),
    )


# --------------------------------------------------------------------------- #
# Gram–Schmidt under the mixed form
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class GramSchmidtData:
    rows: tuple[tuple[int, ...], ...]
    bstar: tuple[tuple[Fraction, ...], ...]
    mu: tuple[tuple[Fraction, ...], ...]  # mu[i][j], 0-based, j < i
    norms: tuple[Fraction, ...]           # (b_i*, b_i*)_mix
    iso_rows: tuple[int, ...]
    pivot_rows: tuple[int, ...]
    diso: tuple[Fraction, ...]
    d: tuple[Fraction, ...]

    def recomposes(self) -> bool:
        """b_i == b_i* + Σ_j μ_ij b_j* for every row."""
        for i, row in enumerate(self.rows):
            acc = list(self.bstar[i])
            for j in range(i):
                mu = self.mu[i][j]
                if mu:
                    acc = [x + mu * y for x, y in zip(acc, self.bstar[j])]
            if acc != [Fraction(x) for x in row]:
                return False
        return True


def _prefix_products(values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out: list[Fraction] = []
    acc = Fraction(1)
    for v in values:
        acc *= v
        out.append(acc)
    return tuple(out)


def gram_schmidt_mixed(b: IntMatrix, mix: MixedInnerProduct, count: int | None = None) -> GramSchmidtData:
    """Exact Gram–Schmidt of rows 1..count (default kmax) of b under (,)_mix.

    A zero norm raises ZeroDivisionError: the rows are dependent under the
    form, which only happens if the engine produced a broken basis.
    """
    count = mix.kmax if count is None else count
    rows = tuple(b.row(i) for i in range(count))
    applied = [mix.apply(r) for r in rows]
    H = [[dot(applied[i], rows[j]) for j in range(count)] for i in range(count)]
    mu, norms = gram_schmidt_coefficients(H)
    bstar = orthogonalise(rows, mu)
    iso_set = set(mix.iso_rows)
    iso_rows = tuple(i for i in range(1, count + 1) if i in iso_set)
    pivot_rows = tuple(i for i in range(1, count + 1) if i not in iso_set)
    return GramSchmidtData(
        rows=rows,
        bstar=tuple(tuple(v) for v in bstar),
        mu=tuple(tuple(r[:i]) for i, r in enumerate(mu)),
        norms=tuple(norms),
        iso_rows=iso_rows,
        pivot_rows=pivot_rows,
        diso=_prefix_products([norms[i - 1] for i in iso_rows]),
        d=_prefix_products([norms[i - 1] for i in pivot_rows]),
    )


# --------------------------------------------------------------------------- #
# Checks
# --------------------------------------------------------------------------- #

def check_gram_mix(mix: MixedInnerProduct, bound_B: int) -> dict[str, Verdict]:
    """det(gram_mix) is an integer and det² <= m^m·(B+1)^(2m).

    The detail also reports the tighter kmax^kmax·(B+1)^(2·kmax) for the
    kmax×kmax block actually formed.
    """
    det = mix.det_gram_mix
    integral = det.denominator == 1
    limit = hadamard_sq(mix.m, bound_B)
    block = hadamard_sq(mix.kmax, bound_B)
    return {
        "det_gram_mix_integral": Verdict(integral, f"det(gram_mix) = {det}"),
        "det_gram_mix_hadamard": Verdict(
            det * det <= limit,
            f"det² = {det * det}, bound m^m(B+1)^(2m) = {limit}, kmax-block bound {block}",
        ),
    }


def check_pivot_block(
    A: IntMatrix, mix: MixedInnerProduct, gs: GramSchmidtData, bound_B: int
) -> dict[str, Verdict]:
    """Pivot-row norms are the squared pivots, and their product is the covolume²."""
    out: dict[str, Verdict] = {}
    squares = Verdict.passed()
    for i in gs.pivot_rows:
        norm = gs.norms[i - 1]
        row = A.row(i - 1)
        pivot = row[leading_column(row, A.cols) - 1]
        own = mix.bracket(gs.bstar[i - 1], gs.bstar[i - 1])
        if not is_perfect_square(norm) or norm != own or norm != pivot * pivot:
            squares = Verdict.failed(
                f"row {i}: (b*, b*)_mix = {norm}, ⟨b*, b*⟩ = {own}, pivot² = {pivot * pivot}"
            )
            break
    out["pivot_squares"] = squares

    d_full = gs.d[-1] if gs.d else Fraction(1)
    images = [mix.image(gs.rows[i - 1]) for i in gs.pivot_rows]
    covolume_sq = det_rational(gram_rows(images)) if images else Fraction(1)
    r = len(gs.pivot_rows)
    out["covolume"] = Verdict(
        d_full == covolume_sq and d_full <= bound_B**r,
        f"d = {d_full}, det⟨pivot block⟩ = {covolume_sq}, bound {bound_B ** r}",
    )
    diso_full = gs.diso[-1] if gs.diso else Fraction(1)
    out["det_gram_mix_product"] = Verdict(
        mix.det_gram_mix == diso_full * d_full,
        f"det(gram_mix) = {mix.det_gram_mix}, diso·d = {diso_full * d_full}",
    )
    integral = all(x.denominator == 1 for x in gs.diso + gs.d)
    out["diso_d_integral"] = Verdict(integral, f"diso = {gs.diso}, d = {gs.d}")
    return out


def check_mixsmall(gs: GramSchmidtData, m: int, bound_B: int) -> Verdict:
    """H^-1 <= (b_i*, b_i*)_mix <= H with H = (√m(B+1))^m, all in squares."""
    h_sq = hadamard_sq(m, bound_B)
    for i, norm in enumerate(gs.norms, start=1):
        sq = norm * norm
        if sq > h_sq or sq * h_sq < 1:
            return Verdict.failed(f"(b*[{i}], b*[{i}])_mix = {norm} outside [1/H, H], H² = {h_sq}")
    return Verdict.passed()


def check_mix2euc(
    mix: MixedInnerProduct, v: Sequence[Fraction | int], m: int, bound_B: int
) -> tuple[Verdict, Verdict]:
    """(v,v)_mix <= m(B+1)(v,v), and (v,v) <= m·(√m(B+1))^m·(v,v)_mix in squares.

    The second inequality is only claimed for v in the span of e_1..e_kmax.
    """
    euc = Fraction(dot(v, v))
    mixed = mix.pair(v, v)
    upper = m * (bound_B + 1) * euc
    first = Verdict(mixed <= upper, f"(v,v)_mix = {mixed}, bound {upper}")
    lhs = euc * euc
    rhs = m * m * hadamard_sq(m, bound_B) * mixed * mixed
    second = Verdict(lhs <= rhs, f"(v,v)² = {lhs}, bound {rhs}")
    return first, second


def preserved_items(
    gs: GramSchmidtData,
    mix: MixedInnerProduct,
    k: int,
    m: int,
    bound_B: int,
    rank: int,
) -> dict[str, Verdict]:
    """The seven estimates that hold while k moves inside an LLL stage.

    ``k`` is clamped to 1..kmax by the caller; rows beyond the snapshot's
    rows are not part of the form's domain and are skipped.
    """
    h_sq = hadamard_sq(m, bound_B)
    C = big_c(m, bound_B)
    count = len(gs.rows)
    items: dict[str, Verdict] = {}

    bad = next((x for x in gs.diso if x * x > h_sq), None)
    items["diso"] = Verdict(bad is None, "" if bad is None else f"diso = {bad}, H² = {h_sq}")

    d_limit = bound_B**rank
    bad = next((x for x in gs.d if x > d_limit), None)
    items["d"] = Verdict(bad is None, "" if bad is None else f"d = {bad} > {d_limit}")

    row_norms = [mix.pair(r, r) for r in gs.rows]
    limit_other = m * m * C * C * h_sq
    bad_i = next((i for i in range(1, count + 1) if i != k and row_norms[i - 1] ** 2 > limit_other), None)
    items["norm_other"] = Verdict(
        bad_i is None, "" if bad_i is None else f"(b[{bad_i}], b[{bad_i}])_mix = {row_norms[bad_i - 1]}"
    )

    limit_k = m**4 * 81**m * C * C * h_sq**3
    ok_k = k > count or row_norms[k - 1] ** 2 <= limit_k
    items["norm_k"] = Verdict(ok_k, "" if ok_k else f"(b[{k}], b[{k}])_mix = {row_norms[k - 1]}")

    bad_pair = next(
        ((i, j) for i in range(2, min(k, count + 1)) for j in range(1, i) if abs(gs.mu[i - 1][j - 1]) > 1),
        None,
    )
    items["mu_reduced"] = Verdict(
        bad_pair is None,
        "" if bad_pair is None else f"|μ[{bad_pair[0]}][{bad_pair[1]}]| = {abs(gs.mu[bad_pair[0] - 1][bad_pair[1] - 1])}",
    )

    limit_mu_k = 9 ** max(m - k, 0) * m * C * h_sq
    ok_mu_k = k > count or all(mu * mu <= limit_mu_k for mu in gs.mu[k - 1])
    items["mu_k"] = Verdict(ok_mu_k, "" if ok_mu_k else f"μ row {k} exceeds 3^(m-k)·√(mC)·H")

    limit_mu = m * C * h_sq
    bad_pair = next(
        ((i, j) for i in range(k + 1, count + 1) for j in range(1, i) if gs.mu[i - 1][j - 1] ** 2 > limit_mu),
        None,
    )
    items["mu_tail"] = Verdict(
        bad_pair is None, "" if bad_pair is None else f"μ[{bad_pair[0]}][{bad_pair[1]}] exceeds √(mC)·H"
    )
    return items


def check_preserved(
    G: IntMatrix, b: IntMatrix, A: IntMatrix, k: int, kmax: int
) -> dict[str, Verdict]:
    """Standalone form of ``preserved_items`` that builds the snapshot itself."""
    instance = ProblemInstance(G)
    mix = build_mixed(G, b, A, kmax)
    gs = gram_schmidt_mixed(b, mix)
    return preserved_items(gs, mix, min(k, kmax), G.rows, instance.bound_B, instance.rank)


def primitive_integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints
