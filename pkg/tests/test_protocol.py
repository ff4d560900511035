from __future__ import annotations

import json
import socket
import threading

import pytest

from arena.ledger import Category, DEFAULT_PRICES
from arena.model import ContestConfig, Verdict
from arena.orchestrator import SimClock, book_judge_fn
from arena.participant import ParticipantState
from arena.protocol import (ActionKind, ActionRequest, ProtocolError,
                            Session, parse_action, serve_tcp)


def _ac_source(book, pid):
    return next(s for s in book.for_problem(pid)
                if s.expected_verdict is Verdict.AC)


def _session(desk_contest, corpora, book, config=None, **kwargs):
    contest = desk_contest
    if config is not None:
        from arena.model import Contest
        contest = Contest(id=contest.id, config=config,
                          problems=contest.problems,
                          corpora_paths=contest.corpora_paths,
                          root=contest.root)
    participant = ParticipantState(id="p1")
    session = Session(contest, participant,
                      price=DEFAULT_PRICES["scripted"], corpora=corpora,
                      clock=kwargs.pop("clock", SimClock()),
                      judge_fn=book_judge_fn(book, desk_contest), **kwargs)
    return session, participant


# -- parse_action ----------------------------------------------------------

def test_parse_valid_action():
    parsed = parse_action({"action": "VIEW_PROBLEM",
                           "parameters": {"problem_id": "b01_sum"}})
    assert isinstance(parsed, ActionRequest)
    assert parsed.action is ActionKind.VIEW_PROBLEM


def test_parse_invalid_json():
    parsed = parse_action("this is not json {")
    assert isinstance(parsed, ProtocolError)
    assert parsed.code == "malformed"


def test_parse_unknown_action():
    parsed = parse_action({"action": "DANCE"})
    assert isinstance(parsed, ProtocolError)
    assert parsed.code == "unknown_action"


def test_parse_missing_parameter():
    parsed = parse_action({"action": "SUBMIT_SOLUTION",
                           "parameters": {"problem_id": "b01_sum"}})
    assert isinstance(parsed, ProtocolError)
    assert parsed.code == "missing_parameter"


def test_parse_non_dict_parameters():
    parsed = parse_action({"action": "TERMINATE", "parameters": [1]})
    assert parsed.code == "malformed"


# -- state rendering -------------------------------------------------------

def test_render_state_contents(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    snapshot = session.render_state().to_dict()
    assert snapshot["type"] == "state"
    assert snapshot["rules"]["credit_limit"] == 20_000_000
    assert snapshot["rules"]["score_weights"] == {
        "Bronze": 1, "Silver": 2, "Gold": 5, "Platinum": 10}
    assert len(snapshot["available_problems"]) == 12
    assert snapshot["status"]["consumed_credit"] == 0
    assert sorted(snapshot["available_actions"]) == sorted(
        k.value for k in ActionKind)
    assert snapshot["rankings"].startswith("1. p1: Score 0")


def test_visible_problems_restriction(desk_contest, corpora, book):
    session, _ = _session(desk_contest, corpora, book,
                          visible_problems=["b01_sum"])
    snapshot = session.render_state().to_dict()
    assert snapshot["available_problems"] == ["b01_sum"]
    result = session.step({"action": "VIEW_PROBLEM",
                           "parameters": {"problem_id": "s01_sort"}})
    assert not result.ok and result.error.code == "unknown_problem"


# -- turn handling ---------------------------------------------------------

def test_view_problem_payload(desk_contest, corpora, book):
    session, _ = _session(desk_contest, corpora, book)
    result = session.step({"action": "VIEW_PROBLEM",
                           "parameters": {"problem_id": "b01_sum"}})
    assert result.ok
    assert result.payload["problem_id"] == "b01_sum"
    assert result.payload["samples"]
    assert "statement" in result.payload


def test_usage_charged_on_action(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    session.step({"action": "VIEW_PROBLEM",
                  "parameters": {"problem_id": "b01_sum"},
                  "usage": {"input_tokens": 1_000_000, "output_tokens": 0,
                            "model_id": "scripted"}})
    # scripted price is 1.0 USD per Mtok input -> 1,000,000 credits
    assert participant.ledger.category_total(Category.INFERENCE) == 1_000_000


def test_usage_idempotency_key(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    usage = {"input_tokens": 500, "output_tokens": 0,
             "model_id": "scripted", "idempotency_key": "k-1"}
    session.charge_usage(usage)
    session.charge_usage(usage)
    assert participant.ledger.category_total(Category.INFERENCE) == \
        session.charge_usage({"input_tokens": 500, "output_tokens": 0,
                              "model_id": "scripted",
                              "idempotency_key": "k-2"})


def test_malformed_turn_costs_usage_but_no_penalty(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({"action": "FLY", "parameters": {},
                           "usage": {"input_tokens": 100, "output_tokens": 0,
                                     "model_id": "scripted"}})
    assert not result.ok
    assert result.error.code == "unknown_action"
    assert participant.ledger.category_total(Category.PENALTY) == 0
    assert participant.ledger.category_total(Category.INFERENCE) > 0


def test_submit_accept_and_resubmit_rejected(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    sub = _ac_source(book, "b01_sum")
    message = {"action": "SUBMIT_SOLUTION",
               "parameters": {"problem_id": "b01_sum", "source": sub.source,
                              "language": sub.language}}
    result = session.step(message)
    assert result.ok
    assert result.payload["judge"]["verdict"] == "AC"
    assert participant.solved == ["b01_sum"]

    n_subs = len(participant.submissions)
    again = session.step(message)
    assert not again.ok and again.error.code == "already_solved"
    assert len(participant.submissions) == n_subs  # never reached the judge


def test_failed_submit_draws_penalty(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    wrong = book.for_problem("b01_sum")[0]
    assert wrong.expected_verdict is Verdict.WA
    result = session.step({"action": "SUBMIT_SOLUTION",
                           "parameters": {"problem_id": "b01_sum",
                                          "source": wrong.source,
                                          "language": wrong.language}})
    assert not result.ok
    assert participant.ledger.category_total(Category.PENALTY) == 100


def test_hint_action_charges(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({"action": "GET_HINT",
                           "parameters": {"hint_level": 0}})
    assert result.ok
    assert participant.ledger.category_total(Category.HINT) == 500
    assert result.charged == 500


def test_hint_missing_parameter_not_charged(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({"action": "GET_HINT",
                           "parameters": {"hint_level": 2}})
    assert not result.ok
    assert participant.ledger.category_total(Category.HINT) == 0


def test_test_code_flat_charge(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({
        "action": "TEST_CODE",
        "parameters": {"problem_id": "b01_sum",
                       "source": "a,b=map(int,input().split())\nprint(a+b)\n",
                       "language": "python3", "cases": ["1 2\n", "5 5\n"]}})
    assert result.ok
    assert result.payload["compiled"]
    assert [o["stdout"].strip() for o in result.payload["outcomes"]] == \
        ["3", "10"]
    assert participant.ledger.category_total(Category.TEST) == 10


def test_test_code_case_cap(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({
        "action": "TEST_CODE",
        "parameters": {"problem_id": "b01_sum", "source": "print(1)",
                       "language": "python3", "cases": ["\n"] * 9}})
    assert not result.ok and result.error.code == "too_many_cases"
    assert participant.ledger.category_total(Category.TEST) == 0


def test_terminate_withdraws(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({"action": "TERMINATE", "parameters": {}})
    assert result.ok
    assert not participant.active
    follow_up = session.step({"action": "VIEW_PROBLEM",
                              "parameters": {"problem_id": "b01_sum"}})
    assert not follow_up.ok and follow_up.error.code == "not_active"


def test_budget_exhaustion_terminates_with_notice(desk_contest, corpora, book):
    config = ContestConfig(credit_limit=1_000)
    session, participant = _session(desk_contest, corpora, book, config=config)
    result = session.step({"action": "GET_HINT",
                           "parameters": {"hint_level": 1,
                                          "problem_id": "b01_sum"}})
    assert result.terminated
    assert "terminated" in result.payload["notice"]
    assert not participant.active


def test_time_accrual_uses_session_clock(desk_contest, corpora, book):
    clock = SimClock()
    config = ContestConfig(alpha=2.0)
    session, participant = _session(desk_contest, corpora, book,
                                    config=config, clock=clock)
    clock.advance(5_000)
    session.step({"action": "VIEW_PROBLEM",
                  "parameters": {"problem_id": "b01_sum"}})
    assert participant.ledger.category_total(Category.TIME) == 10


def test_charged_reflects_turn_delta(desk_contest, corpora, book):
    session, participant = _session(desk_contest, corpora, book)
    result = session.step({"action": "GET_HINT",
                           "parameters": {"hint_level": 4,
                                          "hint_knowledge": "sorting",
                                          "problem_difficulty": "Silver"},
                           "usage": {"input_tokens": 1000, "output_tokens": 0,
                                     "model_id": "scripted"}})
    assert result.charged == participant.ledger.consumed_total()
    assert result.charged == 1500 + 1000  # hint + 1000 tokens at 1.0/Mtok


# -- transports ------------------------------------------------------------

def _roundtrip_over_tcp(session_factory, script):
    server = serve_tcp(session_factory)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    received = []
    try:
        with socket.create_connection(server.server_address, timeout=10) as s:
            rfile = s.makefile("r", encoding="utf-8")
            wfile = s.makefile("w", encoding="utf-8")
            for message in script:
                received.append(json.loads(rfile.readline()))  # state
                wfile.write(json.dumps(message) + "\n")
                wfile.flush()
                received.append(json.loads(rfile.readline()))  # result/ack
            tail = rfile.readline()
            if tail:
                received.append(json.loads(tail))
    finally:
        server.shutdown()
        server.server_close()
    return received


def test_tcp_session_roundtrip(desk_contest, corpora, book):
    def factory():
        session, _ = _session(desk_contest, corpora, book)
        return session

    sub = _ac_source(book, "b01_sum")
    messages = [
        {"type": "action", "action": "VIEW_PROBLEM",
         "parameters": {"problem_id": "b01_sum"},
         "usage": {"input_tokens": 100, "output_tokens": 20,
                   "model_id": "scripted"}},
        {"type": "action", "action": "SUBMIT_SOLUTION",
         "parameters": {"problem_id": "b01_sum", "source": sub.source,
                        "language": sub.language}},
        {"type": "action", "action": "TERMINATE", "parameters": {}},
    ]
    received = _roundtrip_over_tcp(factory, messages)
    states = [m for m in received if m["type"] == "state"]
    results = [m for m in received if m["type"] == "result"]
    end = [m for m in received if m["type"] == "end"]
    assert len(states) == 3 and len(results) == 3 and len(end) == 1
    assert results[0]["ok"] and results[1]["ok"] and results[2]["ok"]
    assert results[1]["payload"]["judge"]["verdict"] == "AC"
    assert end[0]["reason"] == "WITHDRAWN"
    # the second state reflects the first turn's charge
    assert states[1]["status"]["consumed_credit"] > 0


def test_tcp_standalone_usage_report(desk_contest, corpora, book):
    def factory():
        session, _ = _session(desk_contest, corpora, book)
        return session

    messages = [
        {"type": "usage", "input_tokens": 2_000_000, "output_tokens": 0,
         "model_id": "scripted", "idempotency_key": "u1"},
        {"type": "action", "action": "TERMINATE", "parameters": {}},
    ]
    received = _roundtrip_over_tcp(factory, messages)
    ack = next(m for m in received if m["type"] == "usage_ack")
    assert ack["charged"] == 2_000_000
    assert ack["consumed_credit"] == 2_000_000


def test_stdio_stream_loop(desk_contest, corpora, book, tmp_path):
    import io

    from arena.protocol import _serve_streams

    session, participant = _session(desk_contest, corpora, book)
    reader = io.StringIO(
        json.dumps({"action": "VIEW_PROBLEM",
                    "parameters": {"problem_id": "b02_max"}}) + "\n" +
        json.dumps({"action": "TERMINATE", "parameters": {}}) + "\n")
    writer = io.StringIO()
    _serve_streams(session, reader, writer)
    lines = [json.loads(l) for l in writer.getvalue().splitlines()]
    assert [m["type"] for m in lines] == \
        ["state", "result", "state", "result", "end"]
    assert lines[1]["ok"]
    assert not participant.active
