"""Whole canonical corpus through every check. Slow; run with ``pytest -m slow``."""

from __future__ import annotations

import time

import pytest

from lllhnf.constants import FULL_CHECK_MAX_ROWS
from lllhnf.corpus import GenKind, canonical_corpus
from lllhnf.engine import EngineConfig
from lllhnf.workers import BenchWorker

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def corpus_outcomes():
    entries = canonical_corpus()
    started = time.perf_counter()
    outcomes = BenchWorker(
        [(e.name, e.matrix) for e in entries],
        EngineConfig(),
        full_max_m=FULL_CHECK_MAX_ROWS,
    ).run()
    return entries, outcomes, time.perf_counter() - started


def test_corpus_has_no_hard_violations(corpus_outcomes):
    _, outcomes, _ = corpus_outcomes
    failures = {o.name: o.hard_violations for o in outcomes if not o.ok}
    assert failures == {}


def test_every_run_matches_the_oracle_and_output_conditions(corpus_outcomes):
    _, outcomes, _ = corpus_outcomes
    for o in outcomes:
        assert o.verify is not None and o.verify.ok, o.name
        assert o.conditions is not None and o.conditions.ok, o.name


def test_gcd_vectors_end_in_their_gcd(corpus_outcomes):
    entries, outcomes, _ = corpus_outcomes
    for entry, o in zip(entries, outcomes):
        if entry.spec.kind is GenKind.GCD_VECTOR:
            assert o.gcd is not None and o.gcd.ok, o.name


def test_bit_lengths_stay_under_the_line(corpus_outcomes):
    _, outcomes, _ = corpus_outcomes
    assert all(o.result.metrics.bit_bound_ok for o in outcomes)
