#!/usr/bin/env python3
"""Regenerate the shipped scripted-agent regression logs under
tests/data/regression/. Deterministic for fixed seeds."""

from __future__ import annotations

from pathlib import Path

from arena.agents import CannedSolutionBook, StrategyProfile, make_policy, simulate_swarm
from arena.model import load_contest
from arena.orchestrator import run_match

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "regression"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    contest = load_contest(ROOT / "contests" / "desk")
    book = CannedSolutionBook.load(ROOT / "contests" / "desk" / "book.json")

    # Full-economy match: hints, local tests, penalties, inference.
    run_match(
        [("greedy", make_policy("GreedyEasiest", book, contest,
                                use_tests=True, hint_level=0)),
         ("quitter", make_policy("TerminateNow", book, contest))],
        contest, OUT / "match-greedy-vs-quitter.jsonl", seed=0,
    )

    # Seeded random walk, exercising every action kind stochastically.
    run_match(
        [("walker", make_policy("RandomWalk", book, contest, seed=7))],
        contest, OUT / "match-randomwalk.jsonl", seed=7,
    )

    # One swarm simulation log.
    simulate_swarm(StrategyProfile(kind="CostAwareStrategist", workers=4),
                   contest, book, OUT / "match-swarm-costaware.jsonl")

    print(f"wrote logs under {OUT}")


if __name__ == "__main__":
    main()
