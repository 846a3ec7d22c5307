"""Defaults, bound constants and the canonical corpus location.

These live in one place so the engine, the bound checks, the CLI and the
tests all agree on the reduction parameter, the size of the full-check
sub-corpus and the slack of the bit-length line.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Final

# Lovász parameter. Must satisfy 1/4 < alpha <= 1.
DEFAULT_ALPHA: Final[Fraction] = Fraction(3, 4)
ALPHA_LOWER_EXCLUSIVE: Final[Fraction] = Fraction(1, 4)
ALPHA_UPPER_INCLUSIVE: Final[Fraction] = Fraction(1)

# Per-operation oracles (det(b) and λ/D from scratch) are only run on inputs
# with at most this many rows; they cost O(m^4) rational work per operation.
FULL_CHECK_MAX_ROWS: Final[int] = 5

# A run that needs more engine operations than this is treated as
# non-terminating.
OP_BUDGET: Final[int] = 10**7

# Every bound uses max(B, MIN_B) in place of B.
MIN_B: Final[int] = 2

# Bit-length line: max bits <= BIT_BOUND_FACTOR * m * log2(4 m max(B,2)) + BIT_BOUND_SLACK
BIT_BOUND_FACTOR: Final[int] = 3
BIT_BOUND_SLACK: Final[int] = 16

REPORT_SCHEMA_VERSION: Final[str] = "1"

EXIT_OK: Final[int] = 0
EXIT_VERIFICATION_FAILED: Final[int] = 1
EXIT_BAD_INPUT: Final[int] = 2

# Checked-in canonical corpus. Covers m = 1, n = 1, zero matrices, full
# rank and every rank deficiency 1..m-1 for m, n <= 8 and entries <= 30.
CANONICAL_CORPUS_DIR: Final[str] = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus", "canonical"
)
CANONICAL_MAX_DIM: Final[int] = 8
CANONICAL_MIN_SIZE: Final[int] = 600

BENCH_DEFAULT_WORKERS: Final[int] = 4
