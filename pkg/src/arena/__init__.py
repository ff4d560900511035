"""Credit-budgeted competitive programming arena for autonomous agents."""

__version__ = "0.1.0"

from .ledger import Category, CreditLedger, ModelPrice, PriceTable
from .model import (Contest, ContestConfig, DifficultyLevel, Problem,
                    TestCase, Verdict, load_contest, validate_config)
from .participant import ParticipantState
from .scoring import LeaderboardRow, rank, score

__all__ = [
    "Category", "Contest", "ContestConfig", "CreditLedger",
    "DifficultyLevel", "LeaderboardRow", "ModelPrice", "ParticipantState",
    "PriceTable", "Problem", "TestCase", "Verdict", "load_contest",
    "rank", "score", "validate_config",
]
