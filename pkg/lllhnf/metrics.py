"""Entry bit lengths and operation counts for a single engine run.

The engine calls ``MetricsRecorder.observe`` after every operation with the
rows it touched; ``finalize`` turns the running maxima into a ``RunMetrics``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .constants import BIT_BOUND_FACTOR, BIT_BOUND_SLACK
from .instance import ProblemInstance

if TYPE_CHECKING:
    from .engine import EngineState

log = logging.getLogger(__name__)


def bit_length(x: int) -> int:
    """0 for zero, otherwise floor(log2|x|) + 1."""
    return abs(x).bit_length()


def bit_bound_holds(max_bits: int, m: int, bound_B: int) -> bool:
    """Exact form of max_bits <= 3·m·log2(4·m·B) + 16.

    Compared as 2^(max_bits - 16) <= (4mB)^(3m), so no logarithm is taken.
    """
    excess = max_bits - BIT_BOUND_SLACK
    if excess <= 0:
        return True
    return 2**excess <= (4 * m * bound_B) ** (BIT_BOUND_FACTOR * m)


def bit_bound_value(m: int, bound_B: int) -> float:
    """The bit-length line as a float, for reports only."""
    if m == 0:
        return float(BIT_BOUND_SLACK)
    return BIT_BOUND_FACTOR * m * math.log2(4 * m * bound_B) + BIT_BOUND_SLACK


@dataclass
class RunMetrics:
    m: int
    n: int
    B: int
    bound_B: int

    max_bits_A: int = 0
    max_bits_b: int = 0
    max_bits_lambda: int = 0
    max_bits_D: int = 0

    reduce2_applied: int = 0
    swaps: int = 0
    lovasz_swaps: int = 0
    minus: int = 0
    checkpoints: int = 0
    operations: int = 0  # every reduce2 call, swap and negation, applied or not

    # (operation index, kmax) each time kmax grows
    kmax_timeline: list[tuple[int, int]] = field(default_factory=list)

    @property
    def max_bits(self) -> int:
        return max(self.max_bits_A, self.max_bits_b, self.max_bits_lambda, self.max_bits_D)

    @property
    def row_operations(self) -> int:
        return self.reduce2_applied + self.swaps + self.minus

    @property
    def empirical_c(self) -> float:
        """max_bits / (m·log2(m·B)), the constant hidden in the bit-length bound."""
        if self.m == 0:
            return 0.0
        return self.max_bits / (self.m * math.log2(self.m * self.bound_B))

    @property
    def op_ratio(self) -> float:
        """Row operations relative to (m+n)^4·log2(m·B)."""
        if self.m == 0:
            return 0.0
        return self.row_operations / ((self.m + self.n) ** 4 * math.log2(self.m * self.bound_B))

    @property
    def bit_bound_ok(self) -> bool:
        return bit_bound_holds(self.max_bits, self.m, self.bound_B)


class MetricsRecorder:
    """Running maxima and counters. Owned by one engine run."""

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self.metrics = RunMetrics(
            m=instance.m, n=instance.n, B=instance.B, bound_B=instance.bound_B
        )

    def observe(self, state: EngineState, rows: Iterable[int] | None = None) -> None:
        """Fold the current entries of ``rows`` (1-based; all rows when None) into the maxima.

        For each touched row i this reads row i of A and b, row i of the λ
        table and column i of the λ table. D is always read in full.
        """
        mt = self.metrics
        indices = range(1, state.m + 1) if rows is None else rows
        lam = state.lam
        for i in indices:
            a_row = state.A[i - 1]
            b_row = state.b[i - 1]
            if a_row:
                mt.max_bits_A = max(mt.max_bits_A, max(bit_length(x) for x in a_row))
            mt.max_bits_b = max(mt.max_bits_b, max(bit_length(x) for x in b_row))
            for j in range(1, i):
                mt.max_bits_lambda = max(mt.max_bits_lambda, bit_length(lam[i][j]))
            for r in range(i + 1, state.m + 1):
                mt.max_bits_lambda = max(mt.max_bits_lambda, bit_length(lam[r][i]))
        if state.D:
            mt.max_bits_D = max(mt.max_bits_D, max(bit_length(x) for x in state.D))

    def record_kmax(self, kmax: int) -> None:
        self.metrics.kmax_timeline.append((self.metrics.operations, kmax))

    def finalize(self) -> RunMetrics:
        mt = self.metrics
        log.debug(
            "metrics: max bits A=%d b=%d λ=%d D=%d, %d row ops, empirical c=%.4f",
            mt.max_bits_A, mt.max_bits_b, mt.max_bits_lambda, mt.max_bits_D,
            mt.row_operations, mt.empirical_c,
        )
        return mt
