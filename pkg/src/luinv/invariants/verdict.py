from __future__ import annotations

import enum
from dataclasses import dataclass


class Outcome(str, enum.Enum):
    INEQUIVALENT = "inequivalent"
    CONSISTENT = "consistent"
    EQUIVALENT = "equivalent"


@dataclass(frozen=True)
class Verdict:
    """Result of one criterion.

    ``INEQUIVALENT`` always carries a reproducible ``witness`` (a word, a
    polynomial coefficient or a diagonal index).  ``CONSISTENT`` means no
    refutation was found up to ``bound`` (``None`` for criteria without one).
    """

    criterion: str
    outcome: Outcome
    bound: int | None = None
    witness: str | None = None
    detail: str = ""

    def __post_init__(self):
        if self.outcome is Outcome.INEQUIVALENT and not self.witness:
            raise ValueError("an inequivalent verdict needs a witness")

    @property
    def refuted(self) -> bool:
        return self.outcome is Outcome.INEQUIVALENT

    def relabel(self, criterion: str) -> Verdict:
        return Verdict(criterion, self.outcome, self.bound, self.witness, self.detail)

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "outcome": self.outcome.value,
            "bound": self.bound,
            "witness": self.witness,
        }

    def __str__(self):
        s = f"{self.criterion}: {self.outcome.value}"
        if self.bound is not None:
            s += f" (bound {self.bound})"
        if self.witness:
            s += f" [witness {self.witness}]"
        return s
