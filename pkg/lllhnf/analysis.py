"""Engine observer that runs the bound checks while the algorithm runs.

``AnalysisHarness`` listens to engine events:

* checkpoint: build the mixed form, Gram–Schmidt under it, and check every
  checkpoint estimate (hard);
* checkpoint with kmax < m: open a trickledown phase on the same snapshot;
* swap / k_advance inside a phase: phase step checks (soft);
* new_pivot / new_isotropic: close the phase (hard end-of-phase estimates);
* every event at full check level on small inputs: the descent monitor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .certify import two_regime_gram_schmidt
from .constants import FULL_CHECK_MAX_ROWS
from .engine import CheckLevel, EngineConfig, EngineSnapshot, EventKind, TraceEvent, leading_column
from .errors import PhaseProtocolError, Verdict
from .instance import ProblemInstance
from .mixed import (
    GramSchmidtData,
    MixedInnerProduct,
    build_mixed,
    check_gram_mix,
    check_mix2euc,
    check_mixsmall,
    check_pivot_block,
    gram_schmidt_mixed,
    preserved_items,
)
from .trickledown import PhaseLog, TrickledownPhase

log = logging.getLogger(__name__)


@dataclass
class CheckpointRecord:
    kmax: int
    k: int
    isodim: int
    pivot_cols: tuple[int, ...]
    det_gram_mix: Fraction | None
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [
            f"checkpoint kmax={self.kmax} {name}: {v.detail}"
            for name, v in self.verdicts.items()
            if not v.ok
        ]


def run_checkpoint(
    instance: ProblemInstance, snap: EngineSnapshot, full: bool = False
) -> tuple[CheckpointRecord, MixedInnerProduct | None, GramSchmidtData | None]:
    G, A, b = instance.G, snap.A, snap.b
    m, kmax = instance.m, snap.kmax
    Bm = instance.bound_B
    record = CheckpointRecord(kmax=kmax, k=snap.k, isodim=0, pivot_cols=(), det_gram_mix=None)
    try:
        mix = build_mixed(G, b, A, kmax)
        gs = gram_schmidt_mixed(b, mix)
    except (ValueError, ZeroDivisionError) as exc:
        record.verdicts["mixed_form"] = Verdict.failed(str(exc))
        log.error("checkpoint kmax=%d: %s", kmax, exc)
        return record, None, None

    record.isodim = mix.isodim
    record.pivot_cols = mix.pivot_cols
    record.det_gram_mix = mix.det_gram_mix
    v = record.verdicts
    v["recomposition"] = Verdict(gs.recomposes(), "b_i != b_i* + Σ μ b_j*")
    v.update(check_gram_mix(mix, Bm))
    v.update(check_pivot_block(A, mix, gs, Bm))
    v["mixsmall"] = check_mixsmall(gs, m, Bm)

    upper = lower = Verdict.passed()
    probes = [list(r) for r in gs.rows] + [[1 if j == i else 0 for j in range(m)] for i in range(kmax)]
    for probe in probes:
        first, second = check_mix2euc(mix, probe, m, Bm)
        if upper.ok and not first.ok:
            upper = Verdict.failed(f"v = {probe}: {first.detail}")
        if lower.ok and not second.ok:
            lower = Verdict.failed(f"v = {probe}: {second.detail}")
    v["mix2euc_upper"] = upper
    v["mix2euc_lower"] = lower

    for name, verdict in preserved_items(gs, mix, min(snap.k, kmax), m, Bm, instance.rank).items():
        v[f"preserved_{name}"] = verdict

    if full:
        rows = [list(r) for r in gs.rows]
        images = [mix.image(r) for r in rows]
        regime = two_regime_gram_schmidt(rows, images, mix.isodim)
        same = regime is not None and [list(x) for x in regime[0]] == [list(x) for x in gs.bstar]
        v["two_regime_agreement"] = Verdict(same, "mixed Gram–Schmidt differs from the two-regime one")

    for failure in record.failures:
        log.error("%s", failure)
    log.info(
        "checkpoint kmax=%d: isodim=%d, pivots=%s, det(gram_mix)=%s",
        kmax, mix.isodim, list(mix.pivot_cols), mix.det_gram_mix,
    )
    return record, mix, gs


def settled_sequences(snap: EngineSnapshot, upto: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(diso, d) read off rows 1..upto of a live state.

    diso is D_1..D_z over the leading block of zero rows; d is the running
    product of squared pivots over the echelon rows that follow. Reading
    stops at the first row that breaks echelon order.
    """
    A = snap.A
    n = A.cols
    z = 0
    while z < upto and leading_column(A.row(z), n) > n:
        z += 1
    diso = tuple(snap.D[1:z + 1])
    d: list[int] = []
    acc = 1
    prev = n + 1
    for i in range(z, upto):
        row = A.row(i)
        lead = leading_column(row, n)
        if lead >= prev:
            break
        prev = lead
        acc *= row[lead - 1] ** 2
        d.append(acc)
    return diso, tuple(d)


@dataclass
class DescentMonitor:
    """Per-operation checks at full level: diso/d descent across Lovász swaps, d <= B^rank."""

    instance: ProblemInstance
    lovasz_swaps: int = 0
    violations: list[str] = field(default_factory=list)
    _prev: EngineSnapshot | None = None

    def on_event(self, event: TraceEvent, in_phase: bool) -> None:
        snap = event.snapshot
        if snap is None:
            return
        if not in_phase:
            if event.kind is EventKind.SWAP and event.lovasz and self._prev is not None:
                self._compare(self._prev, snap, event.k)
            limit = self.instance.bound_B ** self.instance.rank
            _, d = settled_sequences(snap, max(snap.k - 1, 0))
            if d and d[-1] > limit:
                self.violations.append(f"d = {d[-1]} > B^rank = {limit} at k={snap.k}")
        self._prev = snap

    def _compare(self, before: EngineSnapshot, after: EngineSnapshot, k: int) -> None:
        self.lovasz_swaps += 1
        diso0, d0 = settled_sequences(before, k)
        diso1, d1 = settled_sequences(after, k)
        for name, old, new in (("diso", diso0, diso1), ("d", d0, d1)):
            for i, (x, y) in enumerate(zip(old, new), start=1):
                if y > x:
                    self.violations.append(f"{name}_{i} grew from {x} to {y} in a Lovász swap at k={k}")


@dataclass
class AnalysisReport:
    checkpoints: list[CheckpointRecord] = field(default_factory=list)
    phases: list[PhaseLog] = field(default_factory=list)
    descent_swaps: int = 0
    descent_violations: list[str] = field(default_factory=list)
    protocol_errors: list[str] = field(default_factory=list)

    @property
    def hard_violations(self) -> list[str]:
        out: list[str] = []
        for cp in self.checkpoints:
            out.extend(cp.failures)
        for phase in self.phases:
            out.extend(phase.hard_failures)
        out.extend(self.descent_violations)
        out.extend(self.protocol_errors)
        return out

    @property
    def soft_violations(self) -> int:
        return sum(len(p.soft) for p in self.phases)


class AnalysisHarness:
    def __init__(self, instance: ProblemInstance, config: EngineConfig | None = None):
        config = config or EngineConfig()
        self.instance = instance
        self.full = config.check_level is CheckLevel.FULL
        self.descent = (
            DescentMonitor(instance) if self.full and instance.m <= FULL_CHECK_MAX_ROWS else None
        )
        self.report = AnalysisReport()
        self._phase: TrickledownPhase | None = None
        self._skipped_phase = False

    def on_event(self, event: TraceEvent) -> None:
        if self.descent is not None:
            self.descent.on_event(event, in_phase=self._phase is not None)
        kind = event.kind
        if kind is EventKind.CHECKPOINT:
            self._checkpoint(event)
        elif kind in (EventKind.SWAP, EventKind.K_ADVANCE):
            if self._phase is not None:
                self._phase.step(event)
        elif kind in (EventKind.NEW_PIVOT, EventKind.NEW_ISOTROPIC):
            if self._phase is None and self._skipped_phase:
                self._skipped_phase = False
                return
            if self._phase is None:
                raise PhaseProtocolError(f"{kind.value} at kmax={event.kmax} without an open phase")
            self.report.phases.append(self._phase.end(event, self.instance.G))
            self._phase = None
        elif kind is EventKind.DONE:
            self._finish()

    def _checkpoint(self, event: TraceEvent) -> None:
        snap = event.snapshot
        if snap is None:
            return
        record, mix, gs = run_checkpoint(self.instance, snap, full=self.full)
        self.report.checkpoints.append(record)
        if snap.kmax < self.instance.m and mix is not None and gs is not None:
            if self._phase is not None:
                raise PhaseProtocolError(f"phase opened at kmax={snap.kmax} while another is open")
            self._phase = TrickledownPhase.begin(self.instance, mix, gs, snap)
        elif snap.kmax < self.instance.m:
            self._skipped_phase = True
            self.report.protocol_errors.append(f"no phase opened at kmax={snap.kmax}: checkpoint failed")

    def _finish(self) -> None:
        if self._phase is not None:
            self.report.protocol_errors.append(f"phase at kmax={self._phase.kmax} never closed")
            self._phase = None
        if self.descent is not None:
            self.report.descent_swaps = self.descent.lovasz_swaps
            self.report.descent_violations = list(self.descent.violations)
        hard = self.report.hard_violations
        if hard:
            log.error("%d hard violations in %dx%d run", len(hard), self.instance.m, self.instance.n)
        if self.report.soft_violations:
            log.warning("%d soft trickledown violations", self.report.soft_violations)
