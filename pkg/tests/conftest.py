from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for bm25_oracle

from arena.agents import CannedSolutionBook
from arena.hints import HintCorpora
from arena.model import load_contest

ROOT = Path(__file__).resolve().parent.parent
DESK = ROOT / "contests" / "desk"
REGRESSION_DIR = Path(__file__).parent / "data" / "regression"


@pytest.fixture(scope="session")
def desk_contest():
    return load_contest(DESK)


@pytest.fixture()
def fresh_contest():
    # Mutable copy for tests that tweak config.
    return load_contest(DESK)


@pytest.fixture(scope="session")
def book():
    return CannedSolutionBook.load(DESK / "book.json")


@pytest.fixture(scope="session")
def corpora(desk_contest):
    return HintCorpora.for_contest(desk_contest)


@pytest.fixture(scope="session")
def regression_logs():
    paths = sorted(REGRESSION_DIR.glob("*.jsonl"))
    assert paths, "regression logs missing; run scripts/make_regression_logs.py"
    return paths
