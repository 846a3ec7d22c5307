"""Thread pool for corpus benchmarks.

Each corpus entry is an independent run, so entries are fanned out over a
``ThreadPoolExecutor`` and collected as they finish. Aggregation happens on
the caller's thread once every run is back.
"""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Sequence

from .constants import BENCH_DEFAULT_WORKERS, FULL_CHECK_MAX_ROWS
from .engine import CheckLevel, EngineConfig
from .exact_linalg import IntMatrix
from .instance import ProblemInstance
from .pipeline import RunOutcome, run_pipeline

log = logging.getLogger(__name__)

ProgressCallback = Callable[[str, RunOutcome], None]


class BenchWorker:
    """Runs named matrices through the pipeline in parallel.

    Inputs with at most ``full_max_m`` rows run at full check level; the rest
    run at ``config.check_level``.
    """

    def __init__(
        self,
        entries: Sequence[tuple[str, IntMatrix]],
        config: EngineConfig | None = None,
        max_workers: int = BENCH_DEFAULT_WORKERS,
        full_max_m: int = 0,
        progress: ProgressCallback | None = None,
    ) -> None:
        self.entries = list(entries)
        self.config = config or EngineConfig()
        self.max_workers = max_workers
        self.full_max_m = min(full_max_m, FULL_CHECK_MAX_ROWS)
        self.progress = progress
        self._lock = threading.Lock()

    def _config_for(self, matrix: IntMatrix) -> EngineConfig:
        if matrix.rows <= self.full_max_m and self.config.check_level is not CheckLevel.FULL:
            return EngineConfig(
                alpha=self.config.alpha,
                check_level=CheckLevel.FULL,
                emit_trace=self.config.emit_trace,
                op_budget=self.config.op_budget,
            )
        return self.config

    def _run_single(self, name: str, matrix: IntMatrix) -> tuple[str, RunOutcome]:
        instance = ProblemInstance(matrix, name=name)
        return name, run_pipeline(instance, self._config_for(matrix))

    def run(self) -> list[RunOutcome]:
        """Outcomes in the order the entries were given."""
        results: dict[str, RunOutcome] = {}
        effective_workers = max(1, min(self.max_workers, len(self.entries) or 1))
        with ThreadPoolExecutor(max_workers=effective_workers) as executor:
            futures = {
                executor.submit(self._run_single, name, matrix): name
                for name, matrix in self.entries
            }
            for future in as_completed(futures):
                name, outcome = future.result()
                with self._lock:
                    results[name] = outcome
                if self.progress is not None:
                    self.progress(name, outcome)
        failed = sum(1 for o in results.values() if not o.ok)
        log.info("bench: %d runs, %d with hard violations", len(results), failed)
        return [results[name] for name, _ in self.entries]
