"""Verification statuses shared by the rewriting engine, the suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Status(str, Enum):
    PROVED_ZERO = "ProvedZero"
    REP_CONSISTENT = "RepConsistent"
    INCONCLUSIVE = "Inconclusive"
    FAILED = "Failed"

    def __str__(self):
        return self.value


# worst first; used to aggregate statuses and choose exit codes
SEVERITY = {
    Status.FAILED: 3,
    Status.INCONCLUSIVE: 2,
    Status.REP_CONSISTENT: 1,
    Status.PROVED_ZERO: 0,
}


class OracleIncoherence(AssertionError):
    """A target reduced to zero symbolically yet is nonzero in a validated representation."""


@dataclass
class VerificationStatus:
    status: Status
    steps: int = 0
    trace: list = field(default_factory=list)
    method: str = ""
    detail: str = ""
    residual: Optional[Any] = None

    @property
    def ok(self) -> bool:
        return self.status in (Status.PROVED_ZERO, Status.REP_CONSISTENT)

    def to_dict(self, with_trace: bool = False) -> dict:
        d = {
            "status": self.status.value,
            "steps": self.steps,
            "method": self.method,
        }
        if self.detail:
            d["detail"] = self.detail
        if self.residual is not None:
            d["residual"] = str(self.residual)
        if with_trace:
            d["trace"] = [t.to_dict() if hasattr(t, "to_dict") else t for t in self.trace]
        return d


def worst(statuses) -> Status:
    statuses = list(statuses)
    if not statuses:
        return Status.PROVED_ZERO
    return max(statuses, key=lambda s: SEVERITY[s])
