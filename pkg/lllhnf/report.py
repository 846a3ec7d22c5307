"""JSON run reports.

Key names are stable. Integers and rationals are written as exact decimal
strings; the only floats are ``empirical_c`` (4 fractional digits). Row and
column indices are 1-based.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from statistics import mean, median
from typing import Any, Sequence

from .analysis import AnalysisReport, CheckpointRecord
from .certify import OutputConditionReport, VerifyReport
from .constants import REPORT_SCHEMA_VERSION
from .engine import leading_column
from .errors import Verdict
from .metrics import RunMetrics, bit_bound_value
from .pipeline import RunOutcome
from .trickledown import PhaseLog


def _num(x: int | Fraction) -> str:
    return str(x)


def _verdict(v: Verdict) -> dict[str, Any]:
    return {"ok": v.ok, "detail": v.detail}


def _metrics(mt: RunMetrics) -> dict[str, Any]:
    return {
        "max_bits": {
            "A": _num(mt.max_bits_A),
            "b": _num(mt.max_bits_b),
            "lambda": _num(mt.max_bits_lambda),
            "D": _num(mt.max_bits_D),
            "all": _num(mt.max_bits),
        },
        "bit_bound": {"value": f"{bit_bound_value(mt.m, mt.bound_B):.4f}", "holds": mt.bit_bound_ok},
        "counts": {
            "reduce2_applied": _num(mt.reduce2_applied),
            "swaps": _num(mt.swaps),
            "lovasz_swaps": _num(mt.lovasz_swaps),
            "minus": _num(mt.minus),
            "checkpoints": _num(mt.checkpoints),
            "operations": _num(mt.operations),
            "row_operations": _num(mt.row_operations),
        },
        "op_ratio": f"{mt.op_ratio:.6f}",
        "empirical_c": round(mt.empirical_c, 4),
        "kmax_timeline": [[_num(op), _num(k)] for op, k in mt.kmax_timeline],
    }


def _checkpoint(cp: CheckpointRecord) -> dict[str, Any]:
    det = cp.det_gram_mix
    return {
        "kmax": _num(cp.kmax),
        "k": _num(cp.k),
        "isodim": _num(cp.isodim),
        "pivot_cols": [_num(c) for c in cp.pivot_cols],
        "det_gram_mix": None if det is None else _num(det),
        "det_gram_mix_integral": det is not None and det.denominator == 1,
        "verdicts": {name: _verdict(v) for name, v in cp.verdicts.items()},
    }


def _phase(ph: PhaseLog) -> dict[str, Any]:
    return {
        "kmax": _num(ph.kmax),
        "ended_by": ph.ended_by,
        "steps": _num(ph.steps),
        "mu0": [_num(x) for x in ph.mu0],
        "witness": [_num(x) for x in ph.witness],
        "r": {_num(k): _num(r) for k, r in sorted(ph.r.items())},
        "start_checks": {name: _verdict(v) for name, v in ph.start_checks.items()},
        "end_checks": {name: _verdict(v) for name, v in ph.end_checks.items()},
        "soft_violations": list(ph.soft),
    }


def _analysis(an: AnalysisReport) -> dict[str, Any]:
    return {
        "checkpoints": [_checkpoint(cp) for cp in an.checkpoints],
        "trickledown": [_phase(ph) for ph in an.phases],
        "descent": {
            "lovasz_swaps": _num(an.descent_swaps),
            "violations": list(an.descent_violations),
        },
    }


def _verify(vr: VerifyReport) -> dict[str, Any]:
    return {
        "product": _verdict(vr.product),
        "unimodular": _verdict(vr.unimodular),
        "canonical": _verdict(vr.canonical),
        "oracle": _verdict(vr.oracle),
    }


def _conditions(oc: OutputConditionReport) -> dict[str, Any]:
    return {
        "isodim": _num(oc.isodim),
        "rank": _num(oc.rank),
        "isotropic_prefix": _verdict(oc.isotropic_prefix),
        "reduced_isotropic_block": _verdict(oc.reduced_isotropic_block),
        "pivot_block": _verdict(oc.pivot_block),
        "size_reduced_cross": _verdict(oc.size_reduced_cross),
        "witness": oc.witness,
    }


def final_pivots(outcome: RunOutcome) -> list[dict[str, str]]:
    if outcome.result is None:
        return []
    A = outcome.result.A
    pivots = []
    for i in range(A.rows):
        row = A.row(i)
        lead = leading_column(row, A.cols)
        if lead <= A.cols:
            pivots.append({"row": _num(i + 1), "col": _num(lead), "value": _num(row[lead - 1])})
    return pivots


def run_report(outcome: RunOutcome) -> dict[str, Any]:
    inst = outcome.instance
    isodim = outcome.conditions.isodim if outcome.conditions is not None else None
    doc: dict[str, Any] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "name": outcome.name,
        "input": {"m": _num(inst.m), "n": _num(inst.n)},
        "B": _num(inst.B),
        "rank": _num(inst.rank),
        "isodim": None if isodim is None else _num(isodim),
        "alpha": _num(outcome.config.alpha),
        "check_level": outcome.config.check_level.value,
        "pivots": final_pivots(outcome),
        "metrics": None if outcome.result is None else _metrics(outcome.result.metrics),
        "analysis": None if outcome.analysis is None else _analysis(outcome.analysis),
        "certify": {
            "verify": None if outcome.verify is None else _verify(outcome.verify),
            "output_conditions": None if outcome.conditions is None else _conditions(outcome.conditions),
            "gcd": None if outcome.gcd is None else _verdict(outcome.gcd),
        },
        "error": outcome.error,
        "hard_violations": outcome.hard_violations,
        "soft_violations": _num(outcome.soft_violations),
        "ok": outcome.ok,
    }
    return doc


def bench_report(outcomes: Sequence[RunOutcome], elapsed_seconds: float) -> dict[str, Any]:
    """Corpus-level aggregate plus a one-line summary per run."""
    cs = [o.result.metrics.empirical_c for o in outcomes if o.result is not None]
    ratios = [o.result.metrics.op_ratio for o in outcomes if o.result is not None]
    hard = sum(len(o.hard_violations) for o in outcomes)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "runs": _num(len(outcomes)),
        "failed_runs": [o.name for o in outcomes if not o.ok],
        "hard_violations": _num(hard),
        "soft_violations": _num(sum(o.soft_violations for o in outcomes)),
        "checkpoints": _num(sum(len(o.analysis.checkpoints) for o in outcomes if o.analysis is not None)),
        "empirical_c": {
            "max": round(max(cs, default=0.0), 4),
            "mean": round(mean(cs), 4) if cs else 0.0,
            "median": round(median(cs), 4) if cs else 0.0,
            "histogram": _histogram(cs),
        },
        "op_ratio_max": f"{max(ratios, default=0.0):.6f}",
        "elapsed_seconds": f"{elapsed_seconds:.2f}",
        "entries": [
            {
                "name": o.name,
                "m": _num(o.instance.m),
                "n": _num(o.instance.n),
                "ok": o.ok,
                "max_bits": None if o.result is None else _num(o.result.metrics.max_bits),
                "empirical_c": None if o.result is None else round(o.result.metrics.empirical_c, 4),
                "soft_violations": _num(o.soft_violations),
                "hard_violations": o.hard_violations,
            }
            for o in outcomes
        ],
    }


def _histogram(values: Sequence[float], width: float = 0.25) -> dict[str, str]:
    """Counts per bucket [k·width, (k+1)·width), keyed by the bucket's lower edge."""
    buckets: dict[int, int] = {}
    for v in values:
        key = int(v // width)
        buckets[key] = buckets.get(key, 0) + 1
    return {f"{k * width:.2f}": _num(c) for k, c in sorted(buckets.items())}


def write_report(path: str, doc: dict[str, Any]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
