"""Exception hierarchy.

Checks never raise for a failed inequality; they return a ``Verdict``.
Exceptions are for broken inputs and broken internal state.
"""

from __future__ import annotations

from typing import NamedTuple


class HnfError(Exception):
    """Base class for everything this package raises on purpose."""


class EngineConsistencyError(HnfError):
    """The engine's λ/D tables, sign or b·G == A relation no longer hold."""


class OpBudgetExceeded(HnfError):
    """The main loop ran past the configured operation budget."""


class PhaseProtocolError(HnfError):
    """A trickledown phase was ended without being started (or similar)."""


class MalformedMatrixError(HnfError, ValueError):
    """Matrix text that does not follow the ``m n`` + rows format."""


class InvalidConfigError(HnfError, ValueError):
    """Engine configuration outside its allowed range."""


class InvalidSpecError(HnfError, ValueError):
    """Corpus generation spec that cannot be honoured."""


class Verdict(NamedTuple):
    """Outcome of a single check: ``ok`` plus a human-readable ``detail``."""

    ok: bool
    detail: str = ""

    @classmethod
    def passed(cls, detail: str = "") -> Verdict:
        return cls(True, detail)

    @classmethod
    def failed(cls, detail: str) -> Verdict:
        return cls(False, detail)
