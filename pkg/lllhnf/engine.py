"""LLL-based Hermite normal form with transformation matrix.

Starting from (A, b) = (G, I) the engine applies unimodular row operations
until A = b·G is in upside-down Hermite normal form: zero rows on top,
leading columns strictly decreasing going down, positive pivots, and every
entry below a pivot reduced into [0, pivot).

Alongside A and b it keeps the all-integer Gram–Schmidt data of the rows of
b under the Euclidean inner product: ``lam[i][j]`` = μ_ij·D_j and ``D[i]``
the i-th leading Gram minor. Rows with a pivot are handled by Euclid steps
on their leading entries; zero rows of A (isotropic rows of b) are handled
by ordinary LLL on λ/D.

All indices in this module are 1-based, as in the usual statement of the
algorithm; ``A[i - 1]`` is row i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Protocol

from .constants import (
    ALPHA_LOWER_EXCLUSIVE,
    ALPHA_UPPER_INCLUSIVE,
    DEFAULT_ALPHA,
    FULL_CHECK_MAX_ROWS,
    OP_BUDGET,
)
from .errors import EngineConsistencyError, InvalidConfigError, OpBudgetExceeded, PhaseProtocolError
from .exact_linalg import IntMatrix, det_exact, euclidean_lambda_d, matmul
from .instance import ProblemInstance
from .metrics import MetricsRecorder, RunMetrics

log = logging.getLogger(__name__)


class CheckLevel(str, Enum):
    NONE = "none"
    CHECKPOINTS = "checkpoints"
    FULL = "full"


def parse_alpha(text: str) -> Fraction:
    """Parse ``P/Q`` (or a plain integer) and range-check it."""
    try:
        alpha = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidConfigError(f"alpha must look like P/Q, got {text!r}") from None
    return validate_alpha(alpha)


def validate_alpha(alpha: Fraction) -> Fraction:
    alpha = Fraction(alpha)
    if not ALPHA_LOWER_EXCLUSIVE < alpha <= ALPHA_UPPER_INCLUSIVE:
        raise InvalidConfigError(
            f"alpha must satisfy {ALPHA_LOWER_EXCLUSIVE} < alpha <= {ALPHA_UPPER_INCLUSIVE}, got {alpha}"
        )
    return alpha


@dataclass(frozen=True)
class EngineConfig:
    alpha: Fraction = DEFAULT_ALPHA
    check_level: CheckLevel = CheckLevel.CHECKPOINTS
    emit_trace: bool = False
    op_budget: int = OP_BUDGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", validate_alpha(self.alpha))
        try:
            level = CheckLevel(self.check_level)
        except ValueError:
            raise InvalidConfigError(f"unknown check level {self.check_level!r}") from None
        object.__setattr__(self, "check_level", level)
        if self.op_budget < 1:
            raise InvalidConfigError(f"op_budget must be positive, got {self.op_budget}")


class EventKind(str, Enum):
    REDUCE = "reduce"
    SWAP = "swap"
    MINUS = "minus"
    K_ADVANCE = "k_advance"
    KMAX_ADVANCE = "kmax_advance"
    NEW_PIVOT = "new_pivot"
    NEW_ISOTROPIC = "new_isotropic"
    CHECKPOINT = "checkpoint"
    DONE = "done"


STRUCTURAL_EVENTS = frozenset({
    EventKind.KMAX_ADVANCE,
    EventKind.NEW_PIVOT,
    EventKind.NEW_ISOTROPIC,
    EventKind.CHECKPOINT,
    EventKind.DONE,
})


@dataclass(frozen=True)
class EngineSnapshot:
    """Immutable copy of the engine state; ``lam``/``D`` keep the 1-based layout."""

    A: IntMatrix
    b: IntMatrix
    lam: tuple[tuple[int, ...], ...]
    D: tuple[int, ...]
    k: int
    kmax: int
    det_sign: int

    @property
    def m(self) -> int:
        return self.b.rows


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    k: int
    i: int = 0
    kmax: int = 0
    snapshot: EngineSnapshot | None = None
    lovasz: bool = False  # swap events: both rows were zero rows of A
    q: int = 0            # reduce events: the multiplier applied


class EngineObserver(Protocol):
    def on_event(self, event: TraceEvent) -> None: ...


class Reduction(NamedTuple):
    q: int
    negated: bool


def leading_column(row: Iterable[int], n: int) -> int:
    for j, x in enumerate(row, start=1):
        if x:
            return j
    return n + 1


def col1(A: IntMatrix, i: int) -> int:
    """Least column j with A[i, j] != 0, or n+1 for a zero row (1-based)."""
    return leading_column(A.row(i - 1), A.cols)


def round_toward_zero_on_ties(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), halves rounded toward zero.

    Returns 0 exactly when 2|num| <= den.
    """
    mag = -((den - 2 * abs(num)) // (2 * den))
    return mag if num >= 0 else -mag


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise EngineConsistencyError(f"inexact division while updating {what}: {num}/{den}")
    return q


class EngineState:
    """The mutable (A, b, λ, D, k, kmax) tuple. Owned by exactly one run."""

    def __init__(self, G: IntMatrix):
        m, n = G.rows, G.cols
        self.m = m
        self.n = n
        self.A: list[list[int]] = G.to_rows()
        self.b: list[list[int]] = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        self.lam: list[list[int]] = [[0] * (m + 1) for _ in range(m + 1)]
        self.D: list[int] = [1] * (m + 1)
        self.k = 2
        self.kmax = min(1, m)
        self.det_sign = 1

    def col1(self, i: int) -> int:
        return leading_column(self.A[i - 1], self.n)

    def minus_row(self, i: int) -> None:
        self.A[i - 1] = [-x for x in self.A[i - 1]]
        self.b[i - 1] = [-x for x in self.b[i - 1]]
        lam = self.lam
        for j in range(1, i):
            lam[i][j] = -lam[i][j]
        for j in range(i + 1, self.m + 1):
            lam[j][i] = -lam[j][i]
        self.det_sign = -self.det_sign

    def reduce2(self, k: int, i: int) -> Reduction:
        """Reduce row k by row i: Euclid step on a pivot, size reduction on a zero row."""
        negated = False
        c = self.col1(i)
        if c <= self.n:
            if self.A[i - 1][c - 1] < 0:
                self.minus_row(i)
                negated = True
            q = self.A[k - 1][c - 1] // self.A[i - 1][c - 1]
        else:
            q = round_toward_zero_on_ties(self.lam[k][i], self.D[i])
        if q:
            self.A[k - 1] = [x - q * y for x, y in zip(self.A[k - 1], self.A[i - 1])]
            self.b[k - 1] = [x - q * y for x, y in zip(self.b[k - 1], self.b[i - 1])]
            lam_k, lam_i = self.lam[k], self.lam[i]
            for j in range(1, i):
                lam_k[j] -= q * lam_i[j]
            lam_k[i] -= q * self.D[i]
        return Reduction(q, negated)

    def swap_wanted(self, k: int, alpha: Fraction) -> bool:
        c1 = self.col1(k - 1)
        if c1 <= self.n:
            return c1 <= self.col1(k)
        if self.col1(k) <= self.n:
            return False
        D = self.D
        lam = self.lam[k][k - 1]
        return alpha.denominator * (D[k - 2] * D[k] + lam * lam) < alpha.numerator * D[k - 1] ** 2

    def swap2(self, k: int) -> None:
        A, b, lam, D = self.A, self.b, self.lam, self.D
        A[k - 2], A[k - 1] = A[k - 1], A[k - 2]
        b[k - 2], b[k - 1] = b[k - 1], b[k - 2]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        d_prev, d_mid, d_k = D[k - 2], D[k - 1], D[k]
        for i in range(k + 1, self.m + 1):
            li1, li = lam[i][k - 1], lam[i][k]
            t = li1 * d_k - li * lk
            lam[i][k - 1] = _exact_div(li1 * lk + li * d_prev, d_mid, f"λ[{i}][{k - 1}]")
            lam[i][k] = _exact_div(t, d_mid, f"λ[{i}][{k}]")
        D[k - 1] = _exact_div(d_prev * d_k + lk * lk, d_mid, f"D[{k - 1}]")
        self.det_sign = -self.det_sign

    def row_profile(self, upto: int) -> tuple[int, int]:
        """(number of zero rows, number of distinct leading columns) among rows 1..upto."""
        zeros = 0
        leads: set[int] = set()
        for i in range(1, upto + 1):
            c = self.col1(i)
            if c > self.n:
                zeros += 1
            else:
                leads.add(c)
        return zeros, len(leads)

    def snapshot(self) -> EngineSnapshot:
        return EngineSnapshot(
            A=IntMatrix.from_rows(self.A, cols=self.n),
            b=IntMatrix.from_rows(self.b, cols=self.m),
            lam=tuple(tuple(r) for r in self.lam),
            D=tuple(self.D),
            k=self.k,
            kmax=self.kmax,
            det_sign=self.det_sign,
        )


@dataclass
class _PhaseWatch:
    kmax: int
    zeros: int
    pivots: int


@dataclass
class HnfResult:
    instance: ProblemInstance
    A: IntMatrix
    b: IntMatrix
    det_sign: int
    metrics: RunMetrics
    trace: list[TraceEvent] = field(default_factory=list)


class HnfEngine:
    """Drives one run: main loop, final sweep, events, per-operation checks."""

    def __init__(
        self,
        instance: ProblemInstance,
        config: EngineConfig | None = None,
        observers: Iterable[EngineObserver] = (),
    ):
        self.instance = instance
        self.config = config or EngineConfig()
        self.state = EngineState(instance.G)
        self.recorder = MetricsRecorder(instance)
        self.observers = list(observers)
        self.trace: list[TraceEvent] = []
        self._phase: _PhaseWatch | None = None
        level = self.config.check_level
        self._full = level is CheckLevel.FULL
        self._oracles = self._full and instance.m <= FULL_CHECK_MAX_ROWS
        self._snapshots = level is not CheckLevel.NONE

    # -- events --------------------------------------------------------------

    def _emit(self, kind: EventKind, k: int, i: int = 0, *, lovasz: bool = False, q: int = 0) -> None:
        st = self.state
        want_snapshot = self._snapshots and (
            self._full
            or kind in STRUCTURAL_EVENTS
            or (self._phase is not None and kind in (EventKind.SWAP, EventKind.K_ADVANCE))
        )
        event = TraceEvent(
            kind=kind, k=k, i=i, kmax=st.kmax,
            snapshot=st.snapshot() if want_snapshot else None,
            lovasz=lovasz, q=q,
        )
        if self.config.emit_trace:
            self.trace.append(event)
        for observer in self.observers:
            observer.on_event(event)

    def _tick(self) -> None:
        mt = self.recorder.metrics
        mt.operations += 1
        if mt.operations > self.config.op_budget:
            raise OpBudgetExceeded(
                f"{self.instance.m}x{self.instance.n} run exceeded {self.config.op_budget} operations"
            )

    def _after_op(self, kind: EventKind, k: int, i: int, rows: tuple[int, ...], **extra) -> None:
        if self._full:
            self._verify_state(kind)
        self.recorder.observe(self.state, rows)
        self._emit(kind, k, i, **extra)
        self._watch_phase()

    # -- per-operation consistency -------------------------------------------

    def _verify_state(self, kind: EventKind) -> None:
        st = self.state
        G = self.instance.G
        bG = matmul(st.b, G.to_rows(), st.m, st.m, st.n)
        if bG != st.A:
            raise EngineConsistencyError(f"b·G != A after {kind.value}")
        if not self._oracles:
            return
        det = det_exact(IntMatrix.from_rows(st.b, cols=st.m))
        if det != st.det_sign:
            raise EngineConsistencyError(
                f"det(b) = {det} but tracked sign is {st.det_sign} after {kind.value}"
            )
        mu, D = euclidean_lambda_d(st.b)
        if D != st.D:
            raise EngineConsistencyError(f"D = {st.D}, Gram minors are {D} after {kind.value}")
        for i in range(2, st.m + 1):
            for j in range(1, i):
                if mu[i - 1][j - 1] * D[j] != st.lam[i][j]:
                    raise EngineConsistencyError(
                        f"λ[{i}][{j}] = {st.lam[i][j]} but μ·D = {mu[i - 1][j - 1] * D[j]} "
                        f"after {kind.value}"
                    )

    # -- trickledown phase detection ----------------------------------------

    def _begin_phase(self) -> None:
        st = self.state
        zeros, pivots = st.row_profile(st.kmax)
        self._phase = _PhaseWatch(st.kmax, zeros, pivots)
        log.debug("phase open at kmax=%d (zero rows %d, pivots %d)", st.kmax, zeros, pivots)
        self._watch_phase()

    def _watch_phase(self) -> None:
        phase = self._phase
        if phase is None:
            return
        zeros, pivots = self.state.row_profile(phase.kmax + 1)
        if zeros > phase.zeros:
            kind = EventKind.NEW_ISOTROPIC
        elif pivots > phase.pivots:
            kind = EventKind.NEW_PIVOT
        else:
            return
        self._phase = None
        log.debug("phase at kmax=%d closed by %s", phase.kmax, kind.value)
        self._emit(kind, self.state.k, phase.kmax + 1)

    def _enter_kmax(self) -> None:
        st = self.state
        if self._phase is not None:
            raise PhaseProtocolError(
                f"kmax reached {st.kmax} while the phase opened at kmax={self._phase.kmax} is unresolved"
            )
        self.recorder.record_kmax(st.kmax)
        self.recorder.metrics.checkpoints += 1
        self._emit(EventKind.KMAX_ADVANCE, st.k)
        self._emit(EventKind.CHECKPOINT, st.k)
        if st.kmax < st.m:
            self._begin_phase()

    # -- operations with bookkeeping ------------------------------------------

    def _minus(self, i: int) -> None:
        self._tick()
        self.state.minus_row(i)
        self.recorder.metrics.minus += 1
        self._after_op(EventKind.MINUS, self.state.k, i, (i,))

    def _reduce(self, k: int, i: int) -> None:
        st = self.state
        c = st.col1(i)
        if c <= st.n and st.A[i - 1][c - 1] < 0:
            self._minus(i)
        self._tick()
        red = st.reduce2(k, i)
        if red.q:
            self.recorder.metrics.reduce2_applied += 1
            self._after_op(EventKind.REDUCE, k, i, (k,), q=red.q)

    def _swap(self, k: int) -> None:
        st = self.state
        lovasz = st.col1(k - 1) > st.n
        self._tick()
        st.swap2(k)
        mt = self.recorder.metrics
        mt.swaps += 1
        if lovasz:
            mt.lovasz_swaps += 1
        self._after_op(EventKind.SWAP, k, k - 1, (k - 1, k), lovasz=lovasz)

    def _final_sweep(self) -> None:
        st = self.state
        for i in range(1, st.m + 1):
            c = st.col1(i)
            if c <= st.n and st.A[i - 1][c - 1] < 0:
                self._minus(i)
        for k in range(2, st.m + 1):
            for i in range(k - 1, 0, -1):
                self._reduce(k, i)

    # -- main loop -------------------------------------------------------------

    def run(self) -> HnfResult:
        st = self.state
        m = st.m
        alpha = self.config.alpha
        self.recorder.observe(st)
        if m >= 1:
            self._enter_kmax()
        while st.k <= m:
            k = st.k
            self._reduce(k, k - 1)
            if st.swap_wanted(k, alpha):
                self._swap(k)
                st.k = max(k - 1, 2)
            else:
                for i in range(k - 2, 0, -1):
                    self._reduce(k, i)
                st.k = k + 1
                self._emit(EventKind.K_ADVANCE, st.k)
                if k > st.kmax:
                    st.kmax = k
                    self._enter_kmax()
        if self._phase is not None:
            raise PhaseProtocolError(f"run ended inside the phase opened at kmax={self._phase.kmax}")
        self._final_sweep()
        if m >= 1:
            self._emit(EventKind.CHECKPOINT, st.k)
        self._emit(EventKind.DONE, st.k)

        mt = self.recorder.finalize()
        log.info(
            "hnf %dx%d done: %d swaps (%d Lovász), %d reductions, %d negations, max bits %d",
            m, st.n, mt.swaps, mt.lovasz_swaps, mt.reduce2_applied, mt.minus, mt.max_bits,
        )
        return HnfResult(
            instance=self.instance,
            A=IntMatrix.from_rows(st.A, cols=st.n),
            b=IntMatrix.from_rows(st.b, cols=m),
            det_sign=st.det_sign,
            metrics=mt,
            trace=self.trace,
        )


def run_hnf(
    G: IntMatrix | ProblemInstance,
    config: EngineConfig | None = None,
    observers: Iterable[EngineObserver] = (),
) -> HnfResult:
    instance = G if isinstance(G, ProblemInstance) else ProblemInstance(G)
    return HnfEngine(instance, config, observers).run()
