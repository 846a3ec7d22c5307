"""Seeded test-matrix generation and the canonical corpus."""

from __future__ import annotations

import glob
import logging
import os
from dataclasses import dataclass
from enum import Enum
from math import isqrt

import numpy as np

from .constants import CANONICAL_CORPUS_DIR
from .errors import InvalidSpecError
from .exact_linalg import IntMatrix, matmul
from .matrix_file import read_matrix_file, write_matrix_file

log = logging.getLogger(__name__)


class GenKind(str, Enum):
    RANDOM = "random"
    RANK_DEFICIENT = "rank_deficient"
    GCD_VECTOR = "gcd_vector"
    DUPLICATE_ROWS = "duplicate_rows"
    SCALED = "scaled"


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    m: int
    n: int
    entry_bound: int = 30
    target_rank: int | None = None
    seed: int = 0
    values: tuple[int, ...] = ()  # gcd_vector only; drawn at random when empty

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", GenKind(self.kind))
        except ValueError:
            raise InvalidSpecError(f"unknown matrix kind {self.kind!r}") from None
        if self.m < 0 or self.n < 0:
            raise InvalidSpecError(f"negative shape {self.m}x{self.n}")
        if self.entry_bound < 0:
            raise InvalidSpecError(f"entry_bound must be >= 0, got {self.entry_bound}")
        if self.target_rank is not None and not 0 <= self.target_rank <= min(self.m, self.n):
            raise InvalidSpecError(
                f"target_rank {self.target_rank} outside 0..{min(self.m, self.n)}"
            )
        if self.kind is GenKind.GCD_VECTOR:
            if self.n != 1:
                raise InvalidSpecError("gcd_vector matrices have exactly one column")
            if self.values and len(self.values) != self.m:
                raise InvalidSpecError(f"gcd_vector needs {self.m} values, got {len(self.values)}")
        if self.kind in (GenKind.DUPLICATE_ROWS, GenKind.SCALED) and self.m < 2:
            raise InvalidSpecError(f"{self.kind.value} needs at least two rows")

    @classmethod
    def gcd_vector(cls, values: list[int] | tuple[int, ...], seed: int = 0) -> GenSpec:
        return cls(GenKind.GCD_VECTOR, len(values), 1, seed=seed, values=tuple(values))


def _uniform(rng: np.random.Generator, bound: int, shape: tuple[int, int]) -> list[list[int]]:
    if shape[0] == 0 or shape[1] == 0:
        return [[] for _ in range(shape[0])] if shape[1] == 0 else []
    return rng.integers(-bound, bound, size=shape, endpoint=True).tolist()


def _insert_row(rng: np.random.Generator, rows: list[list[int]], row: list[int]) -> list[list[int]]:
    pos = int(rng.integers(0, len(rows), endpoint=True))
    return rows[:pos] + [row] + rows[pos:]


def generate(spec: GenSpec) -> IntMatrix:
    """Deterministic in ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    m, n, bound = spec.m, spec.n, spec.entry_bound

    if spec.kind is GenKind.RANDOM:
        rows = _uniform(rng, bound, (m, n))

    elif spec.kind is GenKind.RANK_DEFICIENT:
        r = spec.target_rank if spec.target_rank is not None else max(min(m, n) - 1, 0)
        if r == 0:
            rows = [[0] * n for _ in range(m)]
        else:
            f = isqrt(bound // r)
            left = _uniform(rng, f, (m, r))
            right = _uniform(rng, f, (r, n))
            rows = matmul(left, right, m, r, n)

    elif spec.kind is GenKind.GCD_VECTOR:
        values = list(spec.values) or rng.integers(-bound, bound, size=m, endpoint=True).tolist()
        rows = [[v] for v in values]

    elif spec.kind is GenKind.DUPLICATE_ROWS:
        base = _uniform(rng, bound, (m - 1, n))
        src = int(rng.integers(0, m - 1))
        rows = _insert_row(rng, base, list(base[src]) if n else [])

    else:  # SCALED
        c = int(rng.integers(2, 4))
        base = _uniform(rng, max(bound // c, 1), (m - 1, n))
        src = int(rng.integers(0, m - 1))
        rows = _insert_row(rng, base, [c * x for x in base[src]] if n else [])

    return IntMatrix.from_rows([[int(x) for x in row] for row in rows], cols=n)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    spec: GenSpec
    matrix: IntMatrix


def _header_line(spec: GenSpec) -> str:
    rank = "" if spec.target_rank is None else spec.target_rank
    return (
        f"kind={spec.kind.value} m={spec.m} n={spec.n} bound={spec.entry_bound} "
        f"rank={rank} seed={spec.seed}"
    )


def _read_header(path: str) -> GenSpec:
    """GenSpec from the ``# kind=... seed=...`` line a corpus file starts with."""
    with open(path, encoding="ascii") as fh:
        first = fh.readline()
    if not first.startswith("# kind="):
        raise InvalidSpecError(f"{path}: missing corpus header")
    try:
        fields = dict(tok.split("=", 1) for tok in first[2:].split())
        return GenSpec(
            GenKind(fields["kind"]),
            int(fields["m"]),
            int(fields["n"]),
            int(fields["bound"]),
            target_rank=int(fields["rank"]) if fields.get("rank") else None,
            seed=int(fields["seed"]),
        )
    except (KeyError, ValueError) as exc:
        raise InvalidSpecError(f"{path}: bad corpus header {first.strip()!r}") from exc


def canonical_corpus(directory: str = CANONICAL_CORPUS_DIR) -> list[CorpusEntry]:
    """The fixed corpus checked into ``corpus/canonical``, sorted by name.

    The files are the corpus; nothing here regenerates them, so every
    machine and every numpy version sees the same matrices.
    """
    paths = sorted(glob.glob(os.path.join(directory, "*.txt")))
    if not paths:
        raise FileNotFoundError(f"no canonical corpus under {directory}")
    entries = [
        CorpusEntry(os.path.splitext(os.path.basename(p))[0], _read_header(p), read_matrix_file(p))
        for p in paths
    ]
    log.debug("canonical corpus: %d matrices from %s", len(entries), directory)
    return entries


def write_corpus(directory: str, entries: list[CorpusEntry]) -> list[str]:
    paths = []
    for entry in entries:
        path = os.path.join(directory, f"{entry.name}.txt")
        write_matrix_file(path, entry.matrix, [_header_line(entry.spec)])
        paths.append(path)
    log.info("wrote %d matrices to %s", len(paths), directory)
    return paths


def load_corpus(directory: str) -> list[tuple[str, IntMatrix]]:
    """Every ``*.txt`` matrix file in ``directory``, sorted by name."""
    paths = sorted(glob.glob(os.path.join(directory, "*.txt")))
    return [(os.path.splitext(os.path.basename(p))[0], read_matrix_file(p)) for p in paths]
