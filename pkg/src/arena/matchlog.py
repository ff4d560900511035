"""Append-only match logs: line-delimited JSON, replayable end to end.

Layout: one header line, one line per turn, one footer line written last so
a truncated log is detectably incomplete.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .model import ContestConfig, DifficultyLevel, Verdict


def config_to_mapping(config: ContestConfig) -> dict:
    return {
        "credit_limit": config.credit_limit,
        "score_weights": {l.label: w for l, w in config.score_weights.items()},
        "hint_costs": list(config.hint_costs),
        "test_cost": config.test_cost,
        "per_case_test_cost": config.per_case_test_cost,
        "penalty_schedule": {v.value: c for v, c in config.penalty_schedule.items()},
        "alpha": config.alpha,
        "problem_distribution": {
            l.label: n for l, n in config.problem_distribution.items()
        },
        "agent_turn_timeout": config.agent_turn_timeout,
        "rng_seed": config.rng_seed,
    }


def config_from_mapping(data: dict) -> ContestConfig:
    config = ContestConfig(
        credit_limit=int(data["credit_limit"]),
        score_weights={DifficultyLevel.parse(k): int(v)
                       for k, v in data["score_weights"].items()},
        hint_costs=tuple(data["hint_costs"]),
        test_cost=int(data["test_cost"]),
        per_case_test_cost=int(data.get("per_case_test_cost", 0)),
        penalty_schedule={Verdict[k]: int(v)
                          for k, v in data["penalty_schedule"].items()},
        alpha=float(data["alpha"]),
        problem_distribution={DifficultyLevel.parse(k): int(v)
                              for k, v in data["problem_distribution"].items()},
        agent_turn_timeout=float(data.get("agent_turn_timeout", 300.0)),
        rng_seed=int(data.get("rng_seed", 0)),
    )
    return config


@dataclass
class MatchLog:
    header: dict
    turns: list
    footer: dict | None

    @property
    def complete(self) -> bool:
        return self.footer is not None

    @property
    def participants(self) -> list:
        return list(self.header["participants"])

    def turns_for(self, participant_id: str) -> list:
        return [t for t in self.turns if t["participant"] == participant_id]

    @property
    def config(self) -> ContestConfig:
        return config_from_mapping(self.header["config"])

    @property
    def problem_levels(self) -> dict:
        return {pid: DifficultyLevel.parse(lvl)
                for pid, lvl in self.header.get("problems", {}).items()}


class MatchLogWriter:
    """Streams header, turn, and footer records to a JSONL file."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("w")

    def _emit(self, record: dict) -> None:
        self._fh.write(json.dumps(record) + "\n")
        self._fh.flush()

    def header(self, contest, seed: int, participants) -> None:
        self._emit({
            "type": "header",
            "contest_id": contest.id,
            "config": config_to_mapping(contest.config),
            "problems": {p.id: p.level.label for p in contest.problems.values()},
            "seed": seed,
            "participants": list(participants),
        })

    def turn(self, participant_id: str, turn_index: int, action: str,
             ok: bool, summary: dict, ledger_delta, wall_clock_ms: int,
             error: str | None = None) -> None:
        record = {
            "type": "turn",
            "participant": participant_id,
            "turn_index": turn_index,
            "action": action,
            "ok": ok,
            "summary": summary,
            "ledger_delta": [e.to_dict() for e in ledger_delta],
            "wall_clock_ms": wall_clock_ms,
        }
        if error:
            record["error"] = error
        self._emit(record)

    def footer(self, leaderboard_rows, statuses: dict,
               aborted: bool = False) -> None:
        self._emit({
            "type": "footer",
            "aborted": aborted,
            "leaderboard": [
                {"participant_id": r.participant_id, "score": r.score,
                 "tiebreak": r.tiebreak, "status": r.status}
                for r in leaderboard_rows
            ],
            "statuses": statuses,
        })
        self._fh.close()


def read_log(path) -> MatchLog:
    header = None
    turns = []
    footer = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        kind = record.get("type")
        if kind == "header":
            header = record
        elif kind == "turn":
            turns.append(record)
        elif kind == "footer":
            footer = record
    if header is None:
        raise ValueError(f"{path}: missing header record")
    return MatchLog(header, turns, footer)
