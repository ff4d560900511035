"""Weighted scoring and leaderboard ranking.

Score dominates; ties break on lower consumed credit (including penalties),
then lexicographic participant id so the order is always total.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Contest, ContestConfig, ParticipantStatus


@dataclass(frozen=True)
class LeaderboardRow:
    participant_id: str
    score: int
    tiebreak: int  # consumed_total
    status: str    # "ACTIVE" or "TERMINATED"

    def render(self, position: int) -> str:
        return (
            f"{position}. {self.participant_id}: Score {self.score}, "
            f"Credit+Penalty: {self.tiebreak} [{self.status}]"
        )


def score(solved, contest: Contest, config: ContestConfig) -> int:
    """Sum of difficulty weights over solved problems; all-or-nothing."""
    total = 0
    for problem_id in solved:
        problem = contest.problem(problem_id)
        total += config.score_weights[problem.level]
    return total


def rank(participants, contest: Contest, config: ContestConfig) -> list[LeaderboardRow]:
    """Total-order leaderboard rows for a set of participant states."""
    rows = []
    for p in participants:
        rows.append(LeaderboardRow(
            participant_id=p.id,
            score=score(p.solved, contest, config),
            tiebreak=p.ledger.consumed_total(),
            status=("TERMINATED" if p.status is ParticipantStatus.TERMINATED
                    else "ACTIVE"),
        ))
    rows.sort(key=lambda r: (-r.score, r.tiebreak, r.participant_id))
    return rows


def render_rankings(rows) -> str:
    return "\n".join(row.render(i + 1) for i, row in enumerate(rows))
