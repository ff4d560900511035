"""Command line interface: judge, hint, qualify, run, serve, profile, ablate."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analytics
from .agents import (CannedSolutionBook, StrategyProfile, make_policy,
                     simulate_swarm, SWARM_KINDS)
from .hints import HintCorpora, HintRequest, get_hint
from .judge import judge_submission
from .matchlog import read_log
from .model import DifficultyLevel, load_contest, load_problem
from .orchestrator import run_match, run_qualification, run_series
from .participant import ParticipantState
from .protocol import Session, serve_stdio, serve_tcp

WEIGHT_PRESETS = {
    "flat": {level: 1 for level in DifficultyLevel},
    "default": None,  # keep the config's weights
    "exp": {
        DifficultyLevel.BRONZE: 1,
        DifficultyLevel.SILVER: 10,
        DifficultyLevel.GOLD: 100,
        DifficultyLevel.PLATINUM: 1000,
    },
}


def _apply_overrides(config, args) -> None:
    if getattr(args, "alpha", None) is not None:
        config.alpha = args.alpha
    if getattr(args, "credit_limit", None) is not None:
        config.credit_limit = args.credit_limit
    weights = getattr(args, "weights", None)
    if weights and WEIGHT_PRESETS[weights] is not None:
        config.score_weights = dict(WEIGHT_PRESETS[weights])


def _load_book(contest, book_path=None) -> CannedSolutionBook:
    if book_path is None:
        book_path = contest.root / "book.json"
    if not Path(book_path).exists():
        raise SystemExit(f"no canned-solution book at {book_path}")
    return CannedSolutionBook.load(book_path)


def _policy_factory(name: str, book):
    if name.startswith("scripted:"):
        name = name.split(":", 1)[1]

    def factory(contest, seed=0):
        return make_policy(name, book, contest, seed=seed)

    return factory


def cmd_judge(args) -> int:
    problem = load_problem(args.problem)
    source = Path(args.source).read_bytes()
    result = judge_submission(problem, source, args.lang)
    print(json.dumps(result.to_dict()))
    return 0


def cmd_hint(args) -> int:
    contest = load_contest(args.contest)
    corpora = HintCorpora.for_contest(contest)
    request = HintRequest(
        level=args.level,
        problem_id=args.problem,
        hint_knowledge=args.knowledge,
        problem_difficulty=(DifficultyLevel.parse(args.difficulty)
                            if args.difficulty else None),
    )
    response = get_hint(request, contest, corpora, contest.config)
    print(json.dumps(response.to_dict()))
    return 0


def cmd_qualify(args) -> int:
    contest = load_contest(args.contest)
    _apply_overrides(contest.config, args)
    book = _load_book(contest, args.book)
    factory = _policy_factory(args.agent, book)
    out = Path(args.out or f"qualify-{int(time.time())}.jsonl")
    record = run_qualification(lambda c: factory(c, contest.config.rng_seed),
                               contest, out)
    print(json.dumps({"qualified": record.qualified,
                      "problem_id": record.problem_id,
                      "log": str(out)}))
    return 0 if record.qualified else 1


def cmd_run(args) -> int:
    contest = load_contest(args.contest)
    _apply_overrides(contest.config, args)
    book = _load_book(contest, args.book)

    swarm = [a for a in args.agent
             if a.split(":")[-1] in SWARM_KINDS]
    if swarm:
        for name in args.agent:
            kind = name.split(":")[-1]
            profile = StrategyProfile(kind=kind, workers=args.workers,
                                      seed=args.seed)
            out = Path(args.out or ".") / f"match-{kind}-{int(time.time())}.jsonl"
            stats = simulate_swarm(profile, contest, book, out)
            print(json.dumps({"participant": stats.participant_id,
                              "score": stats.score, "ticks": stats.ticks,
                              "tokens": stats.total_tokens, "log": str(out)}))
        return 0

    factories = [(name.split(":")[-1], _policy_factory(name, book))
                 for name in args.agent]
    if not args.skip_qualification:
        for pid, factory in factories:
            record = run_qualification(
                lambda c: factory(c, args.seed), contest,
                Path(args.out or ".") / f"qualify-{pid}.jsonl")
            if not record.qualified:
                print(f"agent {pid} failed qualification", file=sys.stderr)
                return 1

    out_dir = Path(args.out or ".")
    if args.runs == 1:
        log_path = out_dir / f"match-{int(time.time())}.jsonl"
        log = run_match(
            [(pid, factory(contest, args.seed)) for pid, factory in factories],
            contest, log_path, seed=args.seed)
        print(json.dumps({"log": str(log_path),
                          "leaderboard": log.footer["leaderboard"]}))
    else:
        series = run_series(contest, factories, args.runs, out_dir,
                            base_seed=args.seed)
        print(json.dumps({"runs": series.n, "aggregates": series.aggregates}))
    return 0


def cmd_serve(args) -> int:
    contest = load_contest(args.contest)
    corpora = (HintCorpora.for_contest(contest)
               if contest.corpora_paths else None)

    def session_factory():
        return Session(contest, ParticipantState(id=args.name),
                       corpora=corpora)

    if args.transport == "stdio":
        serve_stdio(session_factory())
        return 0
    server = serve_tcp(session_factory, port=args.port)
    print(f"listening on {server.server_address[0]}:{server.server_address[1]}",
          file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def cmd_profile(args) -> int:
    log = read_log(args.log)
    metrics = {pid: analytics.profile(log, pid) for pid in log.participants}
    breakdowns = {pid: analytics.breakdown(log, pid)
                  for pid in log.participants}
    report = {
        pid: {"profile": metrics[pid].to_dict(),
              "breakdown": breakdowns[pid].to_dict()}
        for pid in log.participants
    }
    print(json.dumps(report, indent=2))
    if args.csv:
        analytics.write_profile_csv(args.csv, metrics)
    if args.fig:
        from . import plots
        plots.render_profile_figure(args.fig, metrics)
        base = Path(args.fig)
        plots.render_breakdown_figure(
            base.with_name(base.stem + "-breakdown" + base.suffix), breakdowns)
    return 0


def cmd_ablate(args) -> int:
    grid = json.loads(Path(args.grid).read_text())
    contest_dir = grid["contest"]
    runs = int(grid.get("runs", 1))
    seed = int(grid.get("seed", 0))
    agent_names = grid.get("agents", ["GreedyEasiest"])

    series_by_label = {}
    for label, overrides in grid["configs"].items():
        contest = load_contest(contest_dir)
        config = contest.config
        if "credit_limit" in overrides:
            config.credit_limit = int(overrides["credit_limit"])
        if "weights" in overrides:
            preset = WEIGHT_PRESETS[overrides["weights"]]
            if preset is not None:
                config.score_weights = dict(preset)
        book = _load_book(contest, grid.get("book"))
        specs = [(name, _policy_factory(name, book)) for name in agent_names]
        out_dir = Path(args.out).parent / f"ablate-{label}"
        series_by_label[label] = run_series(contest, specs, runs, out_dir,
                                            base_seed=seed)

    participants, labels, matrix = analytics.ablation_matrix(series_by_label)
    analytics.write_ablation_csv(args.out, participants, labels, matrix)
    print(f"wrote {args.out}")
    if args.fig:
        from . import plots
        plots.render_ablation_figure(args.fig, participants, labels, matrix)
        print(f"wrote {args.fig}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arena",
        description="Credit-budgeted competitive programming arena.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("judge", help="judge one submission against a problem")
    p.add_argument("--problem", required=True, help="problem directory")
    p.add_argument("--source", required=True, help="submission source file")
    p.add_argument("--lang", required=True,
                   choices=["cpp17", "java", "python3"])
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("hint", help="inspect a hint offline")
    p.add_argument("--contest", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--problem")
    p.add_argument("--knowledge")
    p.add_argument("--difficulty")
    p.set_defaults(func=cmd_hint)

    def add_run_options(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--alpha", type=float)
        p.add_argument("--credit-limit", type=int, dest="credit_limit")
        p.add_argument("--weights", choices=list(WEIGHT_PRESETS))
        p.add_argument("--book", help="canned-solution book path")
        p.add_argument("--out", help="output directory")

    p = sub.add_parser("qualify", help="run the qualification session")
    p.add_argument("--contest", required=True)
    p.add_argument("--agent", required=True)
    add_run_options(p)
    p.set_defaults(func=cmd_qualify)

    p = sub.add_parser("run", help="run a full contest")
    p.add_argument("--contest", required=True)
    p.add_argument("--agent", action="append", required=True,
                   help="e.g. scripted:GreedyEasiest (repeatable)")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--workers", type=int, default=8,
                   help="worker count for swarm profiles")
    p.add_argument("--skip-qualification", action="store_true")
    add_run_options(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("serve", help="serve the turn protocol")
    p.add_argument("--contest", required=True)
    p.add_argument("--transport", choices=["stdio", "tcp"], default="stdio")
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--name", default="agent")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("profile", help="recompute analytics from a match log")
    p.add_argument("log")
    p.add_argument("--csv")
    p.add_argument("--fig", help="also render figures to this path")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("ablate", help="run an ablation grid to CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fig")
    p.set_defaults(func=cmd_ablate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
