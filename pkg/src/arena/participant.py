"""Mutable per-participant state, owned by a single match loop."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ledger import CreditLedger
from .model import ParticipantStatus


@dataclass
class ParticipantState:
    id: str
    ledger: CreditLedger = field(default_factory=CreditLedger)
    solved: list = field(default_factory=list)  # problem ids, solve order
    submissions: list = field(default_factory=list)
    status: ParticipantStatus = ParticipantStatus.ACTIVE

    def mark_solved(self, problem_id: str) -> None:
        if problem_id not in self.solved:
            self.solved.append(problem_id)

    def terminate(self) -> None:
        if self.status is ParticipantStatus.ACTIVE:
            self.status = ParticipantStatus.TERMINATED

    def withdraw(self) -> None:
        if self.status is ParticipantStatus.ACTIVE:
            self.status = ParticipantStatus.WITHDRAWN

    @property
    def active(self) -> bool:
        return self.status is ParticipantStatus.ACTIVE
