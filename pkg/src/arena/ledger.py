"""Credit ledger: the unified economy of inference, hints, tests, time, penalties.

Amounts are integer credits; 1 credit = 1 micro-USD of normalized API spend.
Termination is driven by action + time costs only; penalties count toward the
ranking tie-breaker but never toward termination.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .model import ContestConfig, Verdict


class Category(enum.Enum):
    INFERENCE = "inference"
    HINT = "hint"
    TEST = "test"
    TIME = "time"
    PENALTY = "penalty"


class UnknownModelError(KeyError):
    pass


def round_half_up(x: float) -> int:
    """Round a non-negative credit amount half-up to an integer."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class ModelPrice:
    """USD per million input / output tokens."""

    input_price: float
    output_price: float

    def __post_init__(self):
        if self.input_price < 0 or self.output_price < 0:
            raise ValueError("prices must be >= 0")


class PriceTable:
    def __init__(self, prices: dict | None = None):
        self._prices: dict[str, ModelPrice] = {}
        for model_id, entry in (prices or {}).items():
            if isinstance(entry, ModelPrice):
                self._prices[model_id] = entry
            else:
                self._prices[model_id] = ModelPrice(entry[0], entry[1])

    def __getitem__(self, model_id: str) -> ModelPrice:
        try:
            return self._prices[model_id]
        except KeyError:
            raise UnknownModelError(model_id) from None

    def __contains__(self, model_id: str) -> bool:
        return model_id in self._prices


# Provider list prices (USD per million tokens), shipped as data.
DEFAULT_PRICES = PriceTable({
    "gpt-5": (1.25, 10.00),
    "gpt-5-codex": (1.25, 10.00),
    "gemini-2.5-pro": (1.25, 10.00),
    "claude-sonnet-4": (3.00, 15.00),
    "deepseek-v3": (0.27, 1.10),
    "deepseek-v3.1": (0.27, 1.10),
    "qwen3-235b": (0.70, 2.80),
    "kimi-k2": (1.00, 2.75),
    "glm-4.5": (0.59, 2.19),
    "scripted": (1.00, 1.00),
})


@dataclass(frozen=True)
class LedgerEntry:
    category: Category
    amount: int
    turn_index: int
    t_ms: int

    def __post_init__(self):
        if self.amount < 0:
            raise ValueError("ledger amounts must be >= 0")

    def to_dict(self) -> dict:
        return {
            "category": self.category.value,
            "amount": self.amount,
            "turn": self.turn_index,
            "t_ms": self.t_ms,
        }


@dataclass
class CreditLedger:
    """Append-only record of every credit movement for one participant."""

    entries: list = field(default_factory=list)
    _sums: dict = field(default_factory=lambda: {c: 0 for c in Category})

    def append(self, entry: LedgerEntry) -> None:
        self.entries.append(entry)
        self._sums[entry.category] += entry.amount

    def category_total(self, category: Category) -> int:
        return self._sums[category]

    def charge_inference(self, input_tokens: int, output_tokens: int,
                         price: ModelPrice, turn_index: int = 0,
                         t_ms: int = 0) -> int:
        if input_tokens < 0 or output_tokens < 0:
            raise ValueError("token counts must be >= 0")
        # price is USD/Mtok, so tokens * price is directly micro-USD = credits
        amount = round_half_up(
            input_tokens * price.input_price + output_tokens * price.output_price
        )
        self.append(LedgerEntry(Category.INFERENCE, amount, turn_index, t_ms))
        return amount

    def charge_hint(self, level: int, config: ContestConfig,
                    turn_index: int = 0, t_ms: int = 0) -> int:
        if not 0 <= level <= 4:
            raise ValueError(f"hint level out of range: {level}")
        amount = config.hint_costs[level]
        self.append(LedgerEntry(Category.HINT, amount, turn_index, t_ms))
        return amount

    def charge_test(self, config: ContestConfig, case_count: int = 1,
                    turn_index: int = 0, t_ms: int = 0) -> int:
        amount = config.test_cost + config.per_case_test_cost * case_count
        self.append(LedgerEntry(Category.TEST, amount, turn_index, t_ms))
        return amount

    def accrue_time(self, elapsed_s: float, config: ContestConfig,
                    turn_index: int = 0, t_ms: int = 0) -> int:
        """Bring the Time category up to round(alpha * elapsed).

        Re-accrual with a later elapsed time appends only the delta, so the
        category total never double-counts.
        """
        if elapsed_s < 0:
            raise ValueError("elapsed time must be >= 0")
        target = round_half_up(config.alpha * elapsed_s)
        delta = target - self._sums[Category.TIME]
        if delta > 0:
            self.append(LedgerEntry(Category.TIME, delta, turn_index, t_ms))
        return max(delta, 0)

    def add_penalty(self, verdict: Verdict, config: ContestConfig,
                    turn_index: int = 0, t_ms: int = 0) -> int:
        if verdict is Verdict.AC:
            raise ValueError("no penalty for AC")
        amount = config.penalty_schedule[verdict]
        self.append(LedgerEntry(Category.PENALTY, amount, turn_index, t_ms))
        return amount

    def termination_total(self) -> int:
        """Action + time costs; excludes penalties."""
        return sum(self._sums.values()) - self._sums[Category.PENALTY]

    def consumed_total(self) -> int:
        """Action + time + penalty costs; the ranking tie-breaker."""
        return sum(self._sums.values())

    def is_terminated(self, config: ContestConfig) -> bool:
        return self.termination_total() >= config.credit_limit

    def breakdown(self) -> dict:
        return {c.value: self._sums[c] for c in Category}
