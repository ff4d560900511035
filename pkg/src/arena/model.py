"""Core contest model: configuration, problems, participants, manifest loading.

A contest lives on disk as a directory tree::

    contest.json (or contest.toml)
    problems/<id>/statement.md
    problems/<id>/meta            # JSON: level, limits, flags
    problems/<id>/samples/NN.{in,out}
    problems/<id>/tests/NN.{in,out}

Config keys in the manifest match the ``ContestConfig`` field names exactly.
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class DifficultyLevel(enum.IntEnum):
    """Problem difficulty tiers, totally ordered easiest to hardest."""

    BRONZE = 1
    SILVER = 2
    GOLD = 3
    PLATINUM = 4

    @classmethod
    def parse(cls, name: str) -> "DifficultyLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ManifestError(f"unknown difficulty level: {name!r}") from None

    @property
    def label(self) -> str:
        return self.name.capitalize()


class Verdict(enum.Enum):
    """Judge verdicts. Only AC contributes to score."""

    AC = "AC"
    WA = "WA"
    TLE = "TLE"
    MLE = "MLE"
    RE = "RE"
    CE = "CE"


PENALIZED_VERDICTS = (Verdict.WA, Verdict.RE, Verdict.CE, Verdict.TLE, Verdict.MLE)


class ParticipantStatus(enum.Enum):
    ACTIVE = "ACTIVE"
    TERMINATED = "TERMINATED"  # budget exhausted
    WITHDRAWN = "WITHDRAWN"    # voluntary TERMINATE action


class ManifestError(Exception):
    """Raised for any malformed or inconsistent contest manifest."""


@dataclass(frozen=True)
class TestCase:
    input: bytes
    expected_output: bytes


@dataclass(frozen=True)
class Problem:
    id: str
    level: DifficultyLevel
    statement: str
    samples: tuple[TestCase, ...]
    hidden_tests: tuple[TestCase, ...]
    time_limit_ms: int = 2000
    memory_limit_mib: int = 256
    easiest_bronze: bool = False

    def __post_init__(self):
        if not self.hidden_tests:
            raise ManifestError(f"problem {self.id}: no hidden tests")
        if self.time_limit_ms <= 0 or self.memory_limit_mib <= 0:
            raise ManifestError(f"problem {self.id}: non-positive limits")

    def checksum(self) -> str:
        """Stable digest over statement and all test data."""
        h = hashlib.sha256()
        h.update(self.statement.encode())
        for case in (*self.samples, *self.hidden_tests):
            h.update(case.input)
            h.update(b"\x00")
            h.update(case.expected_output)
            h.update(b"\x01")
        return h.hexdigest()


def _default_weights() -> dict:
    return {
        DifficultyLevel.BRONZE: 1,
        DifficultyLevel.SILVER: 2,
        DifficultyLevel.GOLD: 5,
        DifficultyLevel.PLATINUM: 10,
    }


def _default_distribution() -> dict:
    return {level: 3 for level in DifficultyLevel}


def _default_penalties() -> dict:
    return {v: 100 for v in PENALIZED_VERDICTS}


@dataclass
class ContestConfig:
    """Every tunable of the contest economy."""

    credit_limit: int = 20_000_000
    score_weights: dict = field(default_factory=_default_weights)
    hint_costs: tuple = (500, 1000, 1000, 1500, 1500)
    test_cost: int = 10
    per_case_test_cost: int = 0
    penalty_schedule: dict = field(default_factory=_default_penalties)
    alpha: float = 0.0
    problem_distribution: dict = field(default_factory=_default_distribution)
    agent_turn_timeout: float = 300.0
    rng_seed: int = 0
    run_all_cases: bool = False
    max_custom_cases: int = 8

    @property
    def total_problems(self) -> int:
        return sum(self.problem_distribution.values())


def validate_config(config: ContestConfig) -> list[str]:
    """Return a list of invariant violations; empty list means valid."""
    violations = []
    if config.credit_limit < 0:
        violations.append("credit_limit: must be >= 0")
    if len(config.hint_costs) != 5:
        violations.append("hint_costs: exactly five levels required")
    if any(c < 0 for c in config.hint_costs):
        violations.append("hint_costs: all costs must be >= 0")
    if config.test_cost < 0:
        violations.append("test_cost: must be >= 0")
    if config.per_case_test_cost < 0:
        violations.append("per_case_test_cost: must be >= 0")
    if config.alpha < 0:
        violations.append("alpha: must be >= 0")
    for verdict in PENALIZED_VERDICTS:
        if config.penalty_schedule.get(verdict, 0) < 0:
            violations.append(f"penalty_schedule[{verdict.value}]: must be >= 0")
    for level in DifficultyLevel:
        if config.score_weights.get(level, 0) <= 0:
            violations.append(f"score_weights[{level.label}]: must be > 0")
        if config.problem_distribution.get(level, 0) < 0:
            violations.append(f"problem_distribution[{level.label}]: must be >= 0")
    return violations


@dataclass(frozen=True)
class SubmissionRecord:
    problem_id: str
    turn_index: int
    verdict: Verdict
    passed: int
    total: int
    language_id: str
    source_hash: str

    def __post_init__(self):
        if self.passed > self.total:
            raise ValueError("passed > total")
        if (self.verdict is Verdict.AC) != (self.passed == self.total):
            raise ValueError("verdict AC iff passed == total")


@dataclass
class Contest:
    id: str
    config: ContestConfig
    problems: dict  # problem id -> Problem, insertion-ordered
    corpora_paths: dict = field(default_factory=dict)
    root: Optional[Path] = None

    def problem(self, problem_id: str) -> Problem:
        try:
            return self.problems[problem_id]
        except KeyError:
            raise KeyError(f"unknown problem id: {problem_id}") from None

    def by_level(self, level: DifficultyLevel) -> list[Problem]:
        return [p for p in self.problems.values() if p.level == level]

    def qualification_problem(self) -> Problem:
        flagged = [p for p in self.problems.values() if p.easiest_bronze]
        if flagged:
            return flagged[0]
        bronze = self.by_level(DifficultyLevel.BRONZE)
        if not bronze:
            raise ManifestError("contest has no Bronze problem for qualification")
        return bronze[0]


def _config_from_mapping(data: dict) -> ContestConfig:
    config = ContestConfig()
    if "credit_limit" in data:
        config.credit_limit = int(data["credit_limit"])
    if "score_weights" in data:
        config.score_weights = {
            DifficultyLevel.parse(k): int(v) for k, v in data["score_weights"].items()
        }
    if "hint_costs" in data:
        config.hint_costs = tuple(int(v) for v in data["hint_costs"])
    if "test_cost" in data:
        config.test_cost = int(data["test_cost"])
    if "per_case_test_cost" in data:
        config.per_case_test_cost = int(data["per_case_test_cost"])
    if "penalty_schedule" in data:
        config.penalty_schedule = {
            Verdict[k.upper()]: int(v) for k, v in data["penalty_schedule"].items()
        }
    if "alpha" in data:
        config.alpha = float(data["alpha"])
    if "problem_distribution" in data:
        config.problem_distribution = {
            DifficultyLevel.parse(k): int(v)
            for k, v in data["problem_distribution"].items()
        }
    if "agent_turn_timeout" in data:
        config.agent_turn_timeout = float(data["agent_turn_timeout"])
    if "rng_seed" in data:
        config.rng_seed = int(data["rng_seed"])
    if "run_all_cases" in data:
        config.run_all_cases = bool(data["run_all_cases"])
    if "max_custom_cases" in data:
        config.max_custom_cases = int(data["max_custom_cases"])
    return config


_CASE_RE = re.compile(r"^(\d{2})\.in$")


def _load_cases(case_dir: Path, problem_id: str) -> tuple[TestCase, ...]:
    if not case_dir.is_dir():
        return ()
    cases = []
    for in_path in sorted(case_dir.glob("*.in")):
        if not _CASE_RE.match(in_path.name):
            raise ManifestError(
                f"problem {problem_id}: case file {in_path.name} is not NN.in"
            )
        out_path = in_path.with_suffix(".out")
        if not out_path.exists():
            raise ManifestError(f"problem {problem_id}: missing {out_path.name}")
        cases.append(TestCase(in_path.read_bytes(), out_path.read_bytes()))
    return tuple(cases)


def load_problem(problem_dir) -> Problem:
    """Load a single problem directory (statement.md, meta, samples/, tests/)."""
    problem_dir = Path(problem_dir)
    pid = problem_dir.name
    meta_path = problem_dir / "meta"
    if not meta_path.exists():
        raise ManifestError(f"problem {pid}: missing meta")
    meta = json.loads(meta_path.read_text())
    statement_path = problem_dir / "statement.md"
    if not statement_path.exists():
        raise ManifestError(f"problem {pid}: missing statement.md")
    return Problem(
        id=pid,
        level=DifficultyLevel.parse(meta["level"]),
        statement=statement_path.read_text(),
        samples=_load_cases(problem_dir / "samples", pid),
        hidden_tests=_load_cases(problem_dir / "tests", pid),
        time_limit_ms=int(meta.get("time_limit_ms", 2000)),
        memory_limit_mib=int(meta.get("memory_limit_mib", 256)),
        easiest_bronze=bool(meta.get("easiest_bronze", False)),
    )


def load_contest(manifest_path) -> Contest:
    """Load and validate a contest from its manifest directory."""
    root = Path(manifest_path)
    if not root.is_dir():
        raise ManifestError(f"contest directory not found: {root}")

    json_manifest = root / "contest.json"
    toml_manifest = root / "contest.toml"
    if json_manifest.exists():
        raw = json.loads(json_manifest.read_text())
    elif toml_manifest.exists():
        raw = tomllib.loads(toml_manifest.read_text())
    else:
        raise ManifestError(f"no contest.json or contest.toml under {root}")

    contest_id = str(raw.get("contest_id", root.name))
    config = _config_from_mapping(raw.get("config", raw))
    violations = validate_config(config)
    if violations:
        raise ManifestError("invalid config: " + "; ".join(violations))

    problems_dir = root / "problems"
    if not problems_dir.is_dir():
        raise ManifestError(f"missing problems/ under {root}")

    # An explicit problem list in the manifest wins; otherwise every
    # subdirectory of problems/ is a problem.
    if "problems" in raw:
        listed = [str(p) for p in raw["problems"]]
    else:
        listed = sorted(d.name for d in problems_dir.iterdir() if d.is_dir())

    problems: dict = {}
    for pid in listed:
        if pid in problems:
            raise ManifestError(f"duplicate problem id: {pid}")
        problem_dir = problems_dir / pid
        if not problem_dir.is_dir():
            raise ManifestError(f"listed problem {pid} has no directory")
        problems[pid] = load_problem(problem_dir)

    counts = {level: 0 for level in DifficultyLevel}
    for p in problems.values():
        counts[p.level] += 1
    for level in DifficultyLevel:
        want = config.problem_distribution.get(level, 0)
        if counts[level] != want:
            raise ManifestError(
                f"distribution mismatch at {level.label}: "
                f"manifest has {counts[level]}, config wants {want}"
            )

    corpora = {}
    for key, rel in raw.get("corpora", {}).items():
        corpora[key] = root / rel

    return Contest(
        id=contest_id, config=config, problems=problems,
        corpora_paths=corpora, root=root,
    )
