"""One matrix through the whole stack: engine, live bound checks, certification."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .analysis import AnalysisHarness, AnalysisReport
from .certify import (
    OutputConditionReport,
    VerifyReport,
    check_gcd_vector,
    check_output_conditions,
    verify_result,
)
from .engine import CheckLevel, EngineConfig, HnfResult, run_hnf
from .errors import EngineConsistencyError, OpBudgetExceeded, PhaseProtocolError, Verdict
from .instance import ProblemInstance

log = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    name: str
    instance: ProblemInstance
    config: EngineConfig
    result: HnfResult | None = None
    analysis: AnalysisReport | None = None
    verify: VerifyReport | None = None
    conditions: OutputConditionReport | None = None
    gcd: Verdict | None = None
    error: str | None = None

    @property
    def hard_violations(self) -> list[str]:
        out: list[str] = []
        if self.error:
            out.append(self.error)
        if self.verify is not None:
            out.extend(self.verify.failures())
        if self.conditions is not None and not self.conditions.ok:
            out.append(f"output conditions: {self.conditions.witness}")
        if self.gcd is not None and not self.gcd.ok:
            out.append(f"gcd column: {self.gcd.detail}")
        if self.analysis is not None:
            out.extend(self.analysis.hard_violations)
        if self.result is not None and not self.result.metrics.bit_bound_ok:
            out.append(f"entry bit length {self.result.metrics.max_bits} above the bit-length line")
        return out

    @property
    def soft_violations(self) -> int:
        return self.analysis.soft_violations if self.analysis is not None else 0

    @property
    def ok(self) -> bool:
        return not self.hard_violations


def run_pipeline(
    instance: ProblemInstance,
    config: EngineConfig | None = None,
    certify_output: bool = True,
) -> RunOutcome:
    config = config or EngineConfig()
    outcome = RunOutcome(name=instance.name, instance=instance, config=config)
    harness = AnalysisHarness(instance, config) if config.check_level is not CheckLevel.NONE else None
    try:
        outcome.result = run_hnf(instance, config, observers=[harness] if harness else [])
    except (EngineConsistencyError, OpBudgetExceeded, PhaseProtocolError) as exc:
        log.error("%s: %s", instance.name or "input", exc)
        outcome.error = f"{type(exc).__name__}: {exc}"
        return outcome
    if harness is not None:
        outcome.analysis = harness.report
    if not certify_output:
        return outcome

    G = instance.G
    result = outcome.result
    outcome.verify = verify_result(G, result.b, result.A)
    if outcome.verify.unimodular.ok:
        outcome.conditions = check_output_conditions(G, result.b, config.alpha)
    if G.cols == 1:
        outcome.gcd = check_gcd_vector(G.column(0), result.A)

    hard = outcome.hard_violations
    if hard:
        log.error("%s: %d hard violations, first: %s", instance.name or "input", len(hard), hard[0])
    return outcome
