"""Monitor for the stretch between kmax growing and the next new pivot or isotropic row.

When kmax grows, the next row b_{kmax+1} = e_{kmax+1} is dependent on the
settled block under the mixed form. The engine then walks it down with
Euclid-style swaps until either a new pivot column appears or a new zero
row (isotropic vector) does. The checks in here measure that walk against
the Gram–Schmidt data frozen at the start of the phase.

Estimates on the walk itself are soft: they are logged and counted, never
fatal. The estimates on the basis handed back to the next LLL stage are hard.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .engine import EngineSnapshot, EventKind, TraceEvent
from .errors import PhaseProtocolError, Verdict
from .exact_linalg import IntMatrix, dot
from .instance import ProblemInstance
from .mixed import (
    GramSchmidtData,
    MixedInnerProduct,
    big_c,
    build_mixed,
    gram_schmidt_mixed,
    hadamard_sq,
    primitive_integer_vector,
)

log = logging.getLogger(__name__)


def index_of_coefficient(mu: Fraction) -> int:
    """Index of Z in Z + Z·mu: the reduced denominator, 1 when mu is 0."""
    return Fraction(mu).denominator


@dataclass
class PhaseLog:
    kmax: int
    mu0: tuple[int, ...]
    witness: tuple[int, ...]
    start_checks: dict[str, Verdict] = field(default_factory=dict)
    r: dict[int, int] = field(default_factory=dict)
    soft: list[str] = field(default_factory=list)
    end_checks: dict[str, Verdict] = field(default_factory=dict)
    ended_by: str = ""
    steps: int = 0

    @property
    def hard_failures(self) -> list[str]:
        failures = []
        for name, verdict in (*self.start_checks.items(), *self.end_checks.items()):
            if not verdict.ok:
                failures.append(f"phase@kmax={self.kmax} {name}: {verdict.detail}")
        return failures


class TrickledownPhase:
    """One phase: created by ``begin``, fed by ``step``, closed by ``end``."""

    def __init__(
        self,
        instance: ProblemInstance,
        mix: MixedInnerProduct,
        gs: GramSchmidtData,
        snapshot: EngineSnapshot,
    ):
        self.instance = instance
        self.mix = mix
        self.gs = gs
        self.kmax = mix.kmax
        self._weights = [mix.apply(v) for v in gs.bstar]
        self._norms = gs.norms
        self.rank = instance.rank
        self.bound_B = instance.bound_B
        self.log = PhaseLog(
            kmax=self.kmax,
            mu0=tuple(snapshot.b.row(i)[self.kmax] for i in range(snapshot.m)),
            witness=(),
        )
        self._open = True
        self._soft_seen: set[tuple] = set()

    # -- frozen coefficients -------------------------------------------------

    def frozen_mu(self, row: Sequence[int], j: int) -> Fraction:
        """μ of ``row`` against frozen b*_j; j = 0 is the coordinate kmax+1."""
        if j == 0:
            return Fraction(row[self.kmax])
        return Fraction(dot(self._weights[j - 1], row)) / self._norms[j - 1]

    # -- protocol --------------------------------------------------------------

    @classmethod
    def begin(
        cls,
        instance: ProblemInstance,
        mix: MixedInnerProduct,
        gs: GramSchmidtData,
        snapshot: EngineSnapshot,
    ) -> TrickledownPhase:
        phase = cls(instance, mix, gs, snapshot)
        phase._check_start()
        log.info("trickledown phase opened at kmax=%d", phase.kmax)
        return phase

    def _check_start(self) -> None:
        mix, gs = self.mix, self.gs
        bad = next(
            ((i + 1, j + 1) for i, row in enumerate(gs.mu) for j, mu in enumerate(row) if abs(mu) > 1),
            None,
        )
        self.log.start_checks["mu_bounded"] = Verdict(
            bad is None, "" if bad is None else f"|μ[{bad[0]}][{bad[1]}]| > 1 at phase start"
        )

        m = self.instance.m
        e_next = [1 if j == self.kmax else 0 for j in range(m)]
        v = [Fraction(x) for x in e_next]
        for j in range(1, self.kmax + 1):
            mu = self.frozen_mu(e_next, j)
            if mu:
                v = [x - mu * y for x, y in zip(v, self.gs.bstar[j - 1])]
        witness = primitive_integer_vector(v)
        self.log.witness = tuple(witness)
        null_mix = mix.pair(witness, witness) == 0
        null_image = not any(mix.image(witness))
        self.log.start_checks["witness_isotropic"] = Verdict(
            null_mix and null_image and any(witness),
            f"v = {witness}",
        )

    def step(self, event: TraceEvent) -> None:
        if not self._open:
            raise PhaseProtocolError("step on a closed trickledown phase")
        snap = event.snapshot
        if snap is None:
            return
        self.log.steps += 1
        b = snap.b
        if event.kind is EventKind.SWAP and event.k - 1 >= 1:
            k = event.k
            mu = self.frozen_mu(b.row(k - 2), k - 1)
            self.log.r.setdefault(k, index_of_coefficient(mu))
        self._soft_checks(b, snap.k)

    def _soft(self, key: tuple, message: str) -> None:
        # one entry per (item, i, j) per phase
        if key in self._soft_seen:
            return
        self._soft_seen.add(key)
        self.log.soft.append(message)
        log.warning("trickledown kmax=%d: %s", self.kmax, message)

    def _soft_checks(self, b: IntMatrix, k: int) -> None:
        top = self.kmax + 1
        Bm = self.bound_B
        m = self.instance.m
        limit_item3 = 4**m * Bm ** (self.rank + 1)
        r_prod = prod(self.log.r.get(i, 1) for i in range(k + 1, top + 1))
        limit_item2 = Bm * (2**max(top - k, 0) * r_prod) ** 2
        for i in range(1, top + 1):
            row = b.row(i - 1)
            for j in range(0, min(i, self.kmax + 1)):
                mu = self.frozen_mu(row, j)
                sq = mu * mu
                if i < k and abs(mu) > 1:
                    self._soft(("below_k", i, j), f"|μ[{i}][{j}]| = {abs(mu)} > 1 below k={k}")
                if i == k and sq > limit_item2:
                    self._soft(("at_k", k, j), f"μ[{k}][{j}]² = {sq} > B·∏(2r)²")
                if sq > limit_item3:
                    self._soft(("coefficient", i, j), f"μ[{i}][{j}]² = {sq} > 4^m·B^(rank+1)")
        r_all = prod(self.log.r.values())
        if r_all * r_all > Bm**self.rank:
            self._soft(("index_product",), f"(∏ r)² = {r_all * r_all} > B^rank")

    def end(self, event: TraceEvent, G: IntMatrix) -> PhaseLog:
        if not self._open:
            raise PhaseProtocolError("trickledown phase ended twice")
        self._open = False
        snap = event.snapshot
        self.log.ended_by = event.kind.value
        if snap is None:
            return self.log
        count = self.kmax + 1
        m = self.instance.m
        Bm = self.bound_B
        b = snap.b

        euc_limit = (4 * m * Bm) ** (4 * m)
        bad = next((i for i in range(1, count + 1) if dot(b.row(i - 1), b.row(i - 1)) > euc_limit), None)
        self.log.end_checks["euclidean_norms"] = Verdict(
            bad is None, "" if bad is None else f"(b[{bad}], b[{bad}]) > (4mB)^(4m)"
        )

        try:
            mix = build_mixed(G, b, snap.A, count, strict=False)
            gs = gram_schmidt_mixed(b, mix, count)
        except (ValueError, ZeroDivisionError) as exc:
            self.log.end_checks["mixed_form"] = Verdict.failed(str(exc))
            return self.log
        C = big_c(m, Bm)
        bad_pair = next(
            ((i + 1, j + 1) for i, row in enumerate(gs.mu) for j, mu in enumerate(row) if mu * mu > C),
            None,
        )
        self.log.end_checks["mu_squared"] = Verdict(
            bad_pair is None, "" if bad_pair is None else f"μ[{bad_pair[0]}][{bad_pair[1]}]² > C"
        )

        bail = m * m * 16**m * Bm ** (2 * (self.rank + 1)) * hadamard_sq(m, Bm)
        for i in range(1, count + 1):
            val = self.mix.pair(b.row(i - 1), b.row(i - 1))
            if val * val > bail:
                self._soft(("bail_out", i), f"(b[{i}], b[{i}])_mix = {val} above the bail-out estimate")

        log.info(
            "trickledown phase at kmax=%d closed by %s after %d steps, r = %s, isodim now %d",
            self.kmax, self.log.ended_by, self.log.steps, dict(self.log.r), mix.isodim,
        )
        return self.log
