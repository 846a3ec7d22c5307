"""ProblemInstance: an input matrix and the quantities every bound is stated in."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .constants import MIN_B
from .exact_linalg import IntMatrix, gram_of, rank_exact


@dataclass(frozen=True)
class ProblemInstance:
    G: IntMatrix
    name: str = ""

    @property
    def m(self) -> int:
        return self.G.rows

    @property
    def n(self) -> int:
        return self.G.cols

    @cached_property
    def gram(self) -> IntMatrix:
        return gram_of(self.G)

    @cached_property
    def B(self) -> int:
        """Largest entry of G·Gᵀ (0 for an empty matrix)."""
        return max(self.gram.entries, default=0)

    @property
    def bound_B(self) -> int:
        """B as used in every bound: never below 2."""
        return max(self.B, MIN_B)

    @cached_property
    def rank(self) -> int:
        return rank_exact(self.G)
