from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arena.ledger import Category, LedgerEntry
from arena.model import ContestConfig, DifficultyLevel, ParticipantStatus
from arena.participant import ParticipantState
from arena.scoring import rank, render_rankings, score

EXP_WEIGHTS = {
    DifficultyLevel.BRONZE: 1, DifficultyLevel.SILVER: 10,
    DifficultyLevel.GOLD: 100, DifficultyLevel.PLATINUM: 1000,
}


def test_max_score_default_weights(desk_contest):
    all_ids = list(desk_contest.problems)
    assert score(all_ids, desk_contest, desk_contest.config) == 54


def test_empty_solved_set(desk_contest):
    assert score([], desk_contest, desk_contest.config) == 0


def test_max_score_exponential_weights(desk_contest):
    config = ContestConfig(score_weights=dict(EXP_WEIGHTS))
    assert score(list(desk_contest.problems), desk_contest, config) == 3333


def test_unknown_problem_id(desk_contest):
    with pytest.raises(KeyError):
        score(["nope"], desk_contest, desk_contest.config)


def _participant(pid, solved=(), consumed=0, terminated=False):
    p = ParticipantState(id=pid)
    p.solved = list(solved)
    if consumed:
        p.ledger.append(LedgerEntry(Category.INFERENCE, consumed, 0, 0))
    if terminated:
        p.terminate()
    return p


def test_tiebreak_by_consumed(desk_contest):
    a = _participant("A", ["b01_sum", "s01_sort", "b02_max", "b03_parity"],
                     consumed=1000)
    b = _participant("B", ["b01_sum", "s01_sort", "b02_max", "b03_parity"],
                     consumed=900)
    rows = rank([a, b], desk_contest, desk_contest.config)
    assert [r.participant_id for r in rows] == ["B", "A"]


def test_score_dominates_consumed(desk_contest):
    a = _participant("A", ["b01_sum", "b02_max", "b03_parity", "s03_reverse"])
    a.ledger.append(LedgerEntry(Category.INFERENCE, 10**6, 0, 0))
    b = _participant("B", ["b01_sum", "s01_sort", "b02_max"], consumed=0)
    rows = rank([a, b], desk_contest, desk_contest.config)
    assert rows[0].participant_id == "A"  # score 5 beats 4 despite spend


def test_residual_tiebreak_by_id(desk_contest):
    a = _participant("beta", ["b01_sum"], consumed=50)
    b = _participant("alpha", ["b02_max"], consumed=50)
    rows = rank([a, b], desk_contest, desk_contest.config)
    assert [r.participant_id for r in rows] == ["alpha", "beta"]


def test_terminated_rows_stay_listed(desk_contest):
    a = _participant("A", ["b01_sum"], consumed=100, terminated=True)
    rows = rank([a], desk_contest, desk_contest.config)
    assert rows[0].status == "TERMINATED"
    assert "[TERMINATED]" in render_rankings(rows)


def test_render_format(desk_contest):
    a = _participant("Agent 1", ["b01_sum"], consumed=42)
    line = render_rankings(rank([a], desk_contest, desk_contest.config))
    assert line == "1. Agent 1: Score 1, Credit+Penalty: 42 [ACTIVE]"


def test_score_monotone_under_additional_solve(desk_contest):
    config = desk_contest.config
    base = score(["b01_sum"], desk_contest, config)
    assert score(["b01_sum", "p01_pow"], desk_contest, config) > base


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(0, 11), st.integers(0, 10**6)),
        min_size=2, max_size=6,
    ),
    st.integers(2, 50),
)
def test_argmax_stability_under_weight_scaling(desk_contest, spec, factor):
    ids = list(desk_contest.problems)
    participants = []
    for index, (n_solved, consumed) in enumerate(spec):
        participants.append(
            _participant(f"p{index}", ids[:n_solved], consumed=consumed))
    config = desk_contest.config
    scaled = ContestConfig(score_weights={
        lvl: w * factor for lvl, w in config.score_weights.items()})
    order = [r.participant_id
             for r in rank(participants, desk_contest, config)]
    scaled_order = [r.participant_id
                    for r in rank(participants, desk_contest, scaled)]
    assert order == scaled_order
