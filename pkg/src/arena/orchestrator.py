"""Runs qualification sessions, full matches, and multi-run series.

Matches drive scripted policies round-robin through real protocol sessions
with a simulated clock, so identical seeds give identical logs.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Callable, Optional

from .agents import CannedSolutionBook, make_policy
from .hints import HintCorpora
from .ledger import DEFAULT_PRICES
from .matchlog import MatchLog, MatchLogWriter, read_log
from .model import Contest, ContestConfig
from .participant import ParticipantState
from .protocol import Session
from .scoring import rank

TURN_TICK_MS = 1000  # simulated wall-clock advance per turn
MAX_TURNS_GUARD = 10_000


class SimClock:
    """Deterministic monotonic clock advanced by the orchestrator."""

    def __init__(self):
        self.now_ms = 0

    def __call__(self) -> float:
        return self.now_ms / 1000.0

    def advance(self, ms: int = TURN_TICK_MS) -> None:
        self.now_ms += ms


def _summary_for(message: dict, result) -> dict:
    summary = {}
    parameters = message.get("parameters") or {}
    if "problem_id" in parameters:
        summary["problem_id"] = parameters["problem_id"]
    judge = result.payload.get("judge")
    if judge:
        summary.update({"verdict": judge["verdict"], "passed": judge["passed"],
                        "total": judge["total"]})
    hint = result.payload.get("hint")
    if hint:
        summary["hint_level"] = hint["level"]
    return summary


def run_match(agents, contest: Contest, log_path,
              config: Optional[ContestConfig] = None,
              corpora: Optional[HintCorpora] = None,
              seed: int = 0, judge_fn=None,
              visible_problems=None) -> MatchLog:
    """Run every participant to completion and persist a replayable log.

    ``agents`` is a list of (participant_id, policy) pairs; turn order is
    round-robin in list order.
    """
    config = config or contest.config
    if corpora is None and contest.corpora_paths:
        corpora = HintCorpora.for_contest(contest)
    clock = SimClock()
    price = DEFAULT_PRICES["scripted"]

    participants = {pid: ParticipantState(id=pid) for pid, _ in agents}
    states = list(participants.values())
    sessions = {}
    run_contest = Contest(id=contest.id, config=config,
                          problems=contest.problems,
                          corpora_paths=contest.corpora_paths,
                          root=contest.root)
    for pid, _ in agents:
        sessions[pid] = Session(
            run_contest, participants[pid], price=price, corpora=corpora,
            rivals=lambda: states, clock=clock, judge_fn=judge_fn,
            visible_problems=visible_problems,
        )

    writer = MatchLogWriter(log_path)
    writer.header(run_contest, seed, [pid for pid, _ in agents])

    last_results = {pid: None for pid, _ in agents}
    guard = 0
    aborted = False
    try:
        while any(p.active for p in states) and guard < MAX_TURNS_GUARD:
            for pid, policy in agents:
                participant = participants[pid]
                if not participant.active:
                    continue
                guard += 1
                session = sessions[pid]
                snapshot = session.render_state().to_dict()
                message = policy.step(snapshot, last_results[pid])
                mark = len(participant.ledger.entries)
                turn_index = session.turn_index
                result = session.step(message)
                last_results[pid] = result.to_dict()
                writer.turn(
                    pid, turn_index, str(message.get("action")),
                    result.ok, _summary_for(message, result),
                    participant.ledger.entries[mark:], clock.now_ms,
                    error=result.error.code if result.error else None,
                )
                clock.advance()
    except Exception:
        writer.footer(rank(states, run_contest, config),
                      {p.id: p.status.value for p in states}, aborted=True)
        raise

    writer.footer(rank(states, run_contest, config),
                  {p.id: p.status.value for p in states})
    return read_log(log_path)


@dataclass
class QualificationRecord:
    qualified: bool
    problem_id: str
    log: MatchLog


def run_qualification(policy_factory, contest: Contest, log_path,
                      config: Optional[ContestConfig] = None,
                      judge_fn=None) -> QualificationRecord:
    """Run a one-problem session on the designated easiest Bronze problem."""
    problem = contest.qualification_problem()
    policy = policy_factory(contest)
    log = run_match([("qualifier", policy)], contest, log_path, config=config,
                    judge_fn=judge_fn, visible_problems=[problem.id])
    solved = any(
        t["action"] == "SUBMIT_SOLUTION" and t["ok"]
        and t["summary"].get("problem_id") == problem.id
        for t in log.turns
    )
    return QualificationRecord(qualified=solved, problem_id=problem.id, log=log)


@dataclass
class SeriesResult:
    runs: list            # list of MatchLog
    aggregates: dict      # participant -> {score_mean, score_std, ...}

    @property
    def n(self) -> int:
        return len(self.runs)


def _mean_std(values) -> tuple:
    mean = statistics.mean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def run_series(contest: Contest, agent_specs, runs: int, log_dir,
               base_seed: int = 0, config: Optional[ContestConfig] = None,
               judge_fn=None) -> SeriesResult:
    """Run ``runs`` matches with distinct seeds and aggregate per participant.

    ``agent_specs`` is a list of (participant_id, policy_factory) where the
    factory is called as factory(contest, seed) fresh for each run.
    """
    from pathlib import Path

    if runs < 1:
        raise ValueError("runs must be >= 1")
    logs = []
    for run_index in range(runs):
        seed = base_seed + run_index
        agents = [(pid, factory(contest, seed)) for pid, factory in agent_specs]
        path = Path(log_dir) / f"match-run{run_index:02d}.jsonl"
        logs.append(run_match(agents, contest, path, config=config,
                              seed=seed, judge_fn=judge_fn))

    aggregates = {}
    for pid, _ in agent_specs:
        scores, consumed, ranks = [], [], []
        for log in logs:
            rows = log.footer["leaderboard"]
            for position, row in enumerate(rows, start=1):
                if row["participant_id"] == pid:
                    scores.append(row["score"])
                    consumed.append(row["tiebreak"])
                    ranks.append(position)
        score_mean, score_std = _mean_std(scores)
        credit_mean, credit_std = _mean_std(consumed)
        rank_mean, rank_std = _mean_std(ranks)
        aggregates[pid] = {
            "score_mean": score_mean, "score_std": score_std,
            "consumed_mean": credit_mean, "consumed_std": credit_std,
            "rank_mean": rank_mean, "rank_std": rank_std,
        }
    return SeriesResult(runs=logs, aggregates=aggregates)


def book_judge_fn(book: CannedSolutionBook, contest: Contest) -> Callable:
    """A judge stand-in resolving known canned sources via the book.

    Useful for fast simulations; unknown sources raise so tests cannot
    silently bypass the real judge.
    """
    from .judge import JudgeResult, source_hash

    by_hash = {}
    for pid, subs in book.submissions.items():
        for sub in subs:
            by_hash[(pid, source_hash(sub.source.encode()))] = sub

    def judge(problem, source, language):
        sub = by_hash.get((problem.id, source_hash(source)))
        if sub is None:
            raise KeyError(f"source not in book for problem {problem.id}")
        total = len(problem.hidden_tests)
        from .model import Verdict
        passed = total if sub.expected_verdict is Verdict.AC else 0
        return JudgeResult(sub.expected_verdict, passed, total)

    return judge
