"""Three-valued verdicts with an auditable certificate trail."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Sequence


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Decision:
    """Outcome of a decision procedure.

    ``certificate`` lists the facts that justify the verdict; a Holds verdict
    always has at least one entry, and an Inconclusive verdict always records
    the jet degree (or search bound) that was reached.
    """

    verdict: Verdict
    certificate: tuple[str, ...] = ()
    jet_degree: int | None = None
    guard: str | None = None
    witness: Any = None

    def __post_init__(self) -> None:
        if self.verdict is Verdict.HOLDS and not self.certificate:
            raise ValueError("a Holds decision needs a certificate")
        if self.verdict is Verdict.INCONCLUSIVE and self.jet_degree is None:
            raise ValueError("an Inconclusive decision must record the degree reached")

    @classmethod
    def holds(cls, certificate: Sequence[str], jet_degree: int | None = None, **kw) -> "Decision":
        return cls(Verdict.HOLDS, tuple(certificate), jet_degree, **kw)

    @classmethod
    def fails(cls, certificate: Sequence[str] = (), jet_degree: int | None = None, **kw) -> "Decision":
        return cls(Verdict.FAILS, tuple(certificate), jet_degree, **kw)

    @classmethod
    def inconclusive(cls, certificate: Sequence[str], jet_degree: int, **kw) -> "Decision":
        return cls(Verdict.INCONCLUSIVE, tuple(certificate), jet_degree, **kw)

    @property
    def holds_(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def is_holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def is_inconclusive(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "certificate": list(self.certificate)}
        if self.jet_degree is not None:
            out["jet_degree"] = self.jet_degree
        if self.guard is not None:
            out["guard"] = self.guard
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def combine(decisions: Sequence[Decision]) -> Verdict:
    """Fails dominates Inconclusive, which dominates Holds."""
    verdicts = [d.verdict for d in decisions]
    if Verdict.FAILS in verdicts:
        return Verdict.FAILS
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.HOLDS


@dataclass(frozen=True)
class Hypothesis:
    statement: str
    decision: Decision

    def to_json(self) -> dict:
        d = self.decision.to_json()
        d["statement"] = self.statement
        return d


@dataclass(frozen=True)
class CriterionReport:
    """Hypotheses checked for an orbit-inclusion theorem and the conclusion they license.

    ``conclusion`` is None unless every hypothesis holds.
    """

    theorem: str
    hypotheses: tuple[Hypothesis, ...]
    conclusion: str | None
    guard: str | None = None
    guard_value: int | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.conclusion is not None and any(not h.decision.is_holds for h in self.hypotheses):
            raise ValueError("a conclusion requires every hypothesis to hold")

    @property
    def verdict(self) -> Verdict:
        return combine([h.decision for h in self.hypotheses])

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def hypothesis(self, prefix: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.statement.startswith(prefix):
                return h
        raise KeyError(prefix)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "guard": self.guard,
            "guard_value": self.guard_value,
            "verdict": self.verdict.value,
            "conclusion": self.conclusion,
            "notes": list(self.notes),
        }
