"""Post-hoc analytics over match logs: strategy profiles, credit breakdowns,
replay verification, and ablation matrices.

Everything here is a pure function of the log, so metrics can always be
recomputed from the record of play.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .matchlog import MatchLog
from .model import DifficultyLevel

# "Attempted" means at least one submission; viewing a problem is free and
# does not count as an attempt.
ATTEMPT_DEFINITION = "submission-based"

CATEGORIES = ("inference", "hint", "test", "time", "penalty")


@dataclass(frozen=True)
class StrategyProfileMetrics:
    attempted_problems: int
    submission_count: int
    submission_precision: Optional[float]
    problems_solve_rate: Optional[float]
    first_submit_accuracy: Optional[float]
    attempt_definition: str = ATTEMPT_DEFINITION

    def to_dict(self) -> dict:
        return {
            "attempted_problems": self.attempted_problems,
            "submission_count": self.submission_count,
            "submission_precision": self.submission_precision,
            "problems_solve_rate": self.problems_solve_rate,
            "first_submit_accuracy": self.first_submit_accuracy,
            "attempt_definition": self.attempt_definition,
        }


@dataclass(frozen=True)
class CreditBreakdown:
    inference: int
    hint: int
    test: int
    time: int
    penalty: int

    @property
    def total(self) -> int:
        return self.inference + self.hint + self.test + self.time + self.penalty

    def to_dict(self) -> dict:
        return {c: getattr(self, c) for c in CATEGORIES} | {"total": self.total}


def _submission_turns(log: MatchLog, participant_id: str):
    return [
        t for t in log.turns_for(participant_id)
        if t["action"] == "SUBMIT_SOLUTION" and "verdict" in t.get("summary", {})
    ]


def profile(log: MatchLog, participant_id: str) -> StrategyProfileMetrics:
    """Behavioral metrics for one participant, recomputed from turn records."""
    if participant_id not in log.participants:
        raise KeyError(f"unknown participant: {participant_id}")
    subs = _submission_turns(log, participant_id)
    by_problem: dict = {}
    for t in subs:
        by_problem.setdefault(t["summary"]["problem_id"], []).append(
            t["summary"]["verdict"])

    submission_count = len(subs)
    ac_submissions = sum(1 for t in subs if t["summary"]["verdict"] == "AC")
    attempted = len(by_problem)
    solved = sum(1 for verdicts in by_problem.values() if "AC" in verdicts)
    first_try = sum(1 for verdicts in by_problem.values()
                    if verdicts and verdicts[0] == "AC")

    return StrategyProfileMetrics(
        attempted_problems=attempted,
        submission_count=submission_count,
        submission_precision=(ac_submissions / submission_count
                              if submission_count else None),
        problems_solve_rate=solved / attempted if attempted else None,
        first_submit_accuracy=first_try / solved if solved else None,
    )


def breakdown(log: MatchLog, participant_id: str) -> CreditBreakdown:
    """Per-category credit sums over the participant's ledger deltas."""
    if participant_id not in log.participants:
        raise KeyError(f"unknown participant: {participant_id}")
    sums = {c: 0 for c in CATEGORIES}
    for t in log.turns_for(participant_id):
        for entry in t["ledger_delta"]:
            sums[entry["category"]] += entry["amount"]
    return CreditBreakdown(**sums)


def replay_leaderboard(log: MatchLog) -> list:
    """Recompute the footer leaderboard purely from the turn records."""
    config = log.config
    levels = log.problem_levels
    rows = []
    for pid in log.participants:
        credit = breakdown(log, pid)
        solved: list = []
        for t in _submission_turns(log, pid):
            if t["summary"]["verdict"] == "AC":
                problem_id = t["summary"]["problem_id"]
                if problem_id not in solved:
                    solved.append(problem_id)
        score = sum(config.score_weights[levels[p]] for p in solved)
        terminated = (credit.total - credit.penalty) >= config.credit_limit
        rows.append({
            "participant_id": pid,
            "score": score,
            "tiebreak": credit.total,
            "status": "TERMINATED" if terminated else "ACTIVE",
        })
    rows.sort(key=lambda r: (-r["score"], r["tiebreak"], r["participant_id"]))
    return rows


def verify_replay(log: MatchLog) -> bool:
    """True iff the stored footer matches a recomputation from the turns."""
    if not log.complete:
        return False
    return replay_leaderboard(log) == log.footer["leaderboard"]


def ablation_matrix(series_by_label: dict):
    """Mean-score table: rows are participants, columns are config labels."""
    labels = list(series_by_label)
    if not labels:
        raise ValueError("no series given")
    participant_sets = [tuple(sorted(s.aggregates)) for s in
                        series_by_label.values()]
    if len(set(participant_sets)) != 1:
        raise ValueError("series have mismatched participant sets")
    participants = sorted(series_by_label[labels[0]].aggregates)
    matrix = [
        [series_by_label[label].aggregates[pid]["score_mean"]
         for label in labels]
        for pid in participants
    ]
    return participants, labels, matrix


def write_ablation_csv(path, participants, labels, matrix) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant", *labels])
        for pid, row in zip(participants, matrix):
            writer.writerow([pid, *row])


def write_profile_csv(path, metrics_by_participant: dict) -> None:
    fields = ["participant", "attempted_problems", "submission_count",
              "submission_precision", "problems_solve_rate",
              "first_submit_accuracy", "attempt_definition"]
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for pid, metrics in metrics_by_participant.items():
            writer.writerow({"participant": pid} | metrics.to_dict())
