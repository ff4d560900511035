"""Scripted reference agents and deterministic swarm-policy simulation.

Scripted policies exercise the full economy with synthetic token counts from
a canned-solution book; swarm profiles trade wall-clock ticks against token
spend and pairwise coordination overhead.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .ledger import Category
from .matchlog import MatchLogWriter
from .model import Contest, ContestConfig, Verdict
from .participant import ParticipantState
from .scoring import rank, score

SWARM_KINDS = ("SpeedySpendthrift", "FrugalPerfectionist", "CostAwareStrategist")
SCRIPTED_KINDS = ("GreedyEasiest", "TerminateNow", "RandomWalk") + SWARM_KINDS


@dataclass(frozen=True)
class CannedSubmission:
    source: str
    language: str
    expected_verdict: Verdict
    input_tokens: int
    output_tokens: int


@dataclass
class CannedSolutionBook:
    """Scripted submissions per problem, with synthetic token usage."""

    submissions: dict  # problem_id -> list of CannedSubmission
    base_input_tokens: int = 200
    base_output_tokens: int = 50

    @classmethod
    def load(cls, path) -> "CannedSolutionBook":
        data = json.loads(Path(path).read_text())
        submissions = {}
        for pid, entries in data["problems"].items():
            submissions[pid] = [
                CannedSubmission(
                    source=e["source"],
                    language=e["language"],
                    expected_verdict=Verdict[e["expected_verdict"]],
                    input_tokens=int(e["tokens"]["input"]),
                    output_tokens=int(e["tokens"]["output"]),
                )
                for e in entries
            ]
        base = data.get("base_tokens", {})
        return cls(
            submissions=submissions,
            base_input_tokens=int(base.get("input", 200)),
            base_output_tokens=int(base.get("output", 50)),
        )

    def for_problem(self, problem_id: str) -> list:
        return self.submissions.get(problem_id, [])


@dataclass(frozen=True)
class StrategyProfile:
    kind: str
    workers: int = 1
    reserve_fraction: float = 0.25
    comm_tokens_per_message: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCRIPTED_KINDS:
            raise ValueError(f"unknown profile kind: {self.kind}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0.0 <= self.reserve_fraction <= 1.0:
            raise ValueError("reserve_fraction must be in [0, 1]")


def _base_usage(book: CannedSolutionBook) -> dict:
    return {"input_tokens": book.base_input_tokens,
            "output_tokens": book.base_output_tokens,
            "model_id": "scripted"}


def _submit_message(problem_id: str, sub: CannedSubmission) -> dict:
    return {
        "action": "SUBMIT_SOLUTION",
        "parameters": {"problem_id": problem_id, "source": sub.source,
                       "language": sub.language},
        "usage": {"input_tokens": sub.input_tokens,
                  "output_tokens": sub.output_tokens,
                  "model_id": "scripted"},
    }


class Policy:
    """A deterministic state machine mapping snapshots to wire messages."""

    def step(self, snapshot: dict, last_result: Optional[dict]) -> dict:
        raise NotImplementedError


class TerminateNow(Policy):
    def step(self, snapshot, last_result):
        return {"action": "TERMINATE", "parameters": {}, "usage": {
            "input_tokens": 10, "output_tokens": 5, "model_id": "scripted"}}


class GreedyEasiest(Policy):
    """Work unsolved problems in ascending difficulty with canned solutions."""

    def __init__(self, book: CannedSolutionBook, contest: Contest,
                 use_tests: bool = False, hint_level: Optional[int] = None):
        self.book = book
        self.use_tests = use_tests
        self.hint_level = hint_level
        order = sorted(contest.problems.values(), key=lambda p: (p.level, p.id))
        self.queue = [p.id for p in order]
        self.samples = {p.id: [c.input.decode("utf-8", "replace")
                               for c in p.samples]
                        for p in contest.problems.values()}
        self.current: Optional[str] = None
        self.sub_index = 0
        self.viewed = False
        self.tested = False
        self.hinted = hint_level is None

    def step(self, snapshot, last_result):
        solved = set(snapshot["status"]["solved_problems"])
        available = set(snapshot.get("available_problems") or self.queue)
        if not self.hinted:
            self.hinted = True
            return {"action": "GET_HINT",
                    "parameters": {"hint_level": self.hint_level},
                    "usage": _base_usage(self.book)}
        while True:
            if self.current is None or self.current in solved:
                self.current = None
                for candidate in self.queue:
                    if candidate not in solved and candidate in available:
                        self.queue.remove(candidate)
                        self.current = candidate
                        self.sub_index = 0
                        self.viewed = False
                        self.tested = not self.use_tests
                        break
                if self.current is None:
                    return {"action": "TERMINATE", "parameters": {},
                            "usage": _base_usage(self.book)}
            if not self.viewed:
                self.viewed = True
                return {"action": "VIEW_PROBLEM",
                        "parameters": {"problem_id": self.current},
                        "usage": _base_usage(self.book)}
            subs = self.book.for_problem(self.current)
            if not self.tested and subs and self.samples.get(self.current):
                self.tested = True
                return {"action": "TEST_CODE",
                        "parameters": {"problem_id": self.current,
                                       "source": subs[0].source,
                                       "language": subs[0].language,
                                       "cases": self.samples[self.current][:1]},
                        "usage": _base_usage(self.book)}
            if self.sub_index < len(subs):
                sub = subs[self.sub_index]
                self.sub_index += 1
                return _submit_message(self.current, sub)
            self.current = None  # out of canned attempts, move on


class RandomWalk(Policy):
    """Seeded uniform choice among legal actions; bounded turn count."""

    def __init__(self, book: CannedSolutionBook, contest: Contest,
                 seed: int = 0, max_turns: int = 40):
        self.book = book
        self.rng = random.Random(seed)
        self.problem_ids = sorted(contest.problems.keys())
        self.max_turns = max_turns
        self.turns = 0
        self.knowledge = ["binary search", "prefix sums", "segment tree",
                          "complete search"]

    def step(self, snapshot, last_result):
        self.turns += 1
        if self.turns > self.max_turns:
            return {"action": "TERMINATE", "parameters": {},
                    "usage": _base_usage(self.book)}
        solved = set(snapshot["status"]["solved_problems"])
        unsolved = [p for p in self.problem_ids if p not in solved]
        choices = ["VIEW_PROBLEM", "GET_HINT", "TEST_CODE"]
        if unsolved:
            choices.append("SUBMIT_SOLUTION")
        action = self.rng.choice(choices)
        usage = _base_usage(self.book)
        if action == "VIEW_PROBLEM":
            return {"action": action,
                    "parameters": {"problem_id": self.rng.choice(self.problem_ids)},
                    "usage": usage}
        if action == "GET_HINT":
            level = self.rng.randint(0, 4)
            parameters = {"hint_level": level}
            if level in (1, 3):
                parameters["problem_id"] = self.rng.choice(self.problem_ids)
            if level in (2, 4):
                parameters["hint_knowledge"] = self.rng.choice(self.knowledge)
            if level == 4:
                parameters["problem_difficulty"] = self.rng.choice(
                    ["Bronze", "Silver", "Gold", "Platinum"])
            return {"action": action, "parameters": parameters, "usage": usage}
        if action == "TEST_CODE":
            pid = self.rng.choice(self.problem_ids)
            subs = self.book.for_problem(pid)
            source = subs[0].source if subs else "print(0)"
            language = subs[0].language if subs else "python3"
            return {"action": action,
                    "parameters": {"problem_id": pid, "source": source,
                                   "language": language, "cases": ["1 2\n"]},
                    "usage": usage}
        pid = self.rng.choice(unsolved)
        subs = self.book.for_problem(pid)
        if not subs:
            return {"action": "VIEW_PROBLEM", "parameters": {"problem_id": pid},
                    "usage": usage}
        return _submit_message(pid, self.rng.choice(subs))


def make_policy(kind: str, book: CannedSolutionBook, contest: Contest,
                seed: int = 0, **kwargs) -> Policy:
    if kind == "GreedyEasiest":
        return GreedyEasiest(book, contest, **kwargs)
    if kind == "TerminateNow":
        return TerminateNow()
    if kind == "RandomWalk":
        return RandomWalk(book, contest, seed=seed, **kwargs)
    raise ValueError(f"not a turn policy: {kind}")


# -- swarm simulation ------------------------------------------------------

TICK_MS = 60_000  # simulated wall-clock per wave


@dataclass
class SwarmStats:
    participant_id: str
    ticks: int
    total_tokens: int
    overhead_tokens: int
    score: int
    solved: list
    terminated: bool


def simulate_swarm(profile: StrategyProfile, contest: Contest,
                   book: CannedSolutionBook, log_path,
                   config: Optional[ContestConfig] = None,
                   price=None) -> SwarmStats:
    """Run one swarm profile to completion as a deterministic simulation.

    Attempts resolve through the book's expected verdicts (the book is
    verified against the real judge elsewhere), so the simulation is fast
    and fully reproducible. Each wave advances one simulated tick no matter
    how many parallel attempts it carries; coordination costs pairwise
    messages among the wave's workers.
    """
    from .ledger import DEFAULT_PRICES

    if profile.kind not in SWARM_KINDS:
        raise ValueError(f"not a swarm kind: {profile.kind}")
    config = config or contest.config
    price = price or DEFAULT_PRICES["scripted"]

    participant = ParticipantState(id=profile.kind)
    ledger = participant.ledger
    writer = MatchLogWriter(log_path)
    writer.header(contest, profile.seed, [participant.id])

    queue = [p.id for p in sorted(contest.problems.values(),
                                  key=lambda p: (p.level, p.id))]
    pending = list(queue)
    ticks = 0
    turn = 0
    total_tokens = 0
    overhead_tokens = 0
    sequential = profile.kind == "FrugalPerfectionist"
    workers = 1 if sequential else profile.workers

    def elapsed_s() -> float:
        return ticks * TICK_MS / 1000.0

    def log_delta(action: str, ok: bool, summary: dict, mark: int,
                  error: Optional[str] = None) -> None:
        nonlocal turn
        writer.turn(participant.id, turn, action, ok, summary,
                    ledger.entries[mark:], ticks * TICK_MS, error)
        turn += 1

    def settle() -> bool:
        """Accrue time and apply the termination rule; True when over budget."""
        ledger.accrue_time(elapsed_s(), config, turn, ticks * TICK_MS)
        if participant.active and ledger.is_terminated(config):
            participant.terminate()
        return not participant.active

    while pending and participant.active:
        if profile.kind == "CostAwareStrategist" and not sequential:
            threshold = (1.0 - profile.reserve_fraction) * config.credit_limit
            if ledger.termination_total() > threshold:
                sequential = True
        width = 1 if sequential else min(workers, len(pending))

        if width > 1:
            pair_messages = width * (width - 1) // 2
            comm = profile.comm_tokens_per_message * pair_messages
            mark = len(ledger.entries)
            ledger.charge_inference(0, comm, price, turn, ticks * TICK_MS)
            total_tokens += comm
            overhead_tokens += comm
            log_delta("COORDINATE", True,
                      {"workers": width, "comm_tokens": comm}, mark)
            if settle():
                break

        wave = [pending.pop(0) for _ in range(width)]
        ticks += 1
        for pid in wave:
            if not participant.active:
                break
            problem = contest.problem(pid)
            for sub in book.for_problem(pid):
                mark = len(ledger.entries)
                ledger.charge_inference(sub.input_tokens, sub.output_tokens,
                                        price, turn, ticks * TICK_MS)
                total_tokens += sub.input_tokens + sub.output_tokens
                verdict = sub.expected_verdict
                total_cases = len(problem.hidden_tests)
                passed = total_cases if verdict is Verdict.AC else 0
                if verdict is Verdict.AC:
                    participant.mark_solved(pid)
                else:
                    ledger.add_penalty(verdict, config, turn, ticks * TICK_MS)
                log_delta("SUBMIT_SOLUTION", verdict is Verdict.AC,
                          {"problem_id": pid, "verdict": verdict.value,
                           "passed": passed, "total": total_cases}, mark)
                if settle() or verdict is Verdict.AC:
                    break
            if not participant.active:
                break

    if participant.active:
        participant.withdraw()
    rows = rank([participant], contest, config)
    writer.footer(rows, {participant.id: participant.status.value})
    return SwarmStats(
        participant_id=participant.id,
        ticks=ticks,
        total_tokens=total_tokens,
        overhead_tokens=overhead_tokens,
        score=score(participant.solved, contest, config),
        solved=list(participant.solved),
        terminated=not participant.status.value == "WITHDRAWN",
    )
