"""Turn-based action protocol: snapshots out, actions in, results back.

Wire format is line-delimited JSON over stdio or a local TCP socket.
Message types:

- server -> client: ``{"type": "state", ...snapshot...}`` then, after each
  action, ``{"type": "result", ...}``; the session closes with
  ``{"type": "end", "reason": ...}``.
- client -> server: ``{"type": "action", "action": ..., "parameters": {...},
  "usage": {...}?}`` or a standalone ``{"type": "usage", ...}`` report.

Token usage is metered by the client and charged here; the server is the
single source of truth for the economy.
"""

from __future__ import annotations

import enum
import json
import socketserver
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import judge as judge_mod
from .hints import HintCorpora, HintError, HintRequest, get_hint
from .ledger import ModelPrice
from .model import Contest, DifficultyLevel, ParticipantStatus, Verdict
from .participant import ParticipantState
from .scoring import rank, render_rankings, score


class ActionKind(enum.Enum):
    VIEW_PROBLEM = "VIEW_PROBLEM"
    GET_HINT = "GET_HINT"
    SUBMIT_SOLUTION = "SUBMIT_SOLUTION"
    TEST_CODE = "TEST_CODE"
    TERMINATE = "TERMINATE"


_REQUIRED_PARAMS = {
    ActionKind.VIEW_PROBLEM: ("problem_id",),
    ActionKind.GET_HINT: ("hint_level",),
    ActionKind.SUBMIT_SOLUTION: ("problem_id", "source", "language"),
    ActionKind.TEST_CODE: ("problem_id", "source", "language", "cases"),
    ActionKind.TERMINATE: (),
}


@dataclass(frozen=True)
class ActionRequest:
    action: ActionKind
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProtocolError:
    code: str  # malformed | unknown_action | missing_parameter
    message: str


def parse_action(raw) -> "ActionRequest | ProtocolError":
    """Parse a wire message into an ActionRequest or a typed ProtocolError."""
    if isinstance(raw, (bytes, str)):
        try:
            data = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return ProtocolError("malformed", "message is not valid JSON")
    else:
        data = raw
    if not isinstance(data, dict) or "action" not in data:
        return ProtocolError("malformed", "message must carry an 'action' field")
    try:
        action = ActionKind(data["action"])
    except (ValueError, TypeError):
        return ProtocolError("unknown_action", f"unknown action {data['action']!r}")
    parameters = data.get("parameters") or {}
    if not isinstance(parameters, dict):
        return ProtocolError("malformed", "'parameters' must be an object")
    for name in _REQUIRED_PARAMS[action]:
        if name not in parameters:
            return ProtocolError(
                "missing_parameter", f"{action.value} requires parameter {name!r}"
            )
    return ActionRequest(action, parameters)


@dataclass(frozen=True)
class StateSnapshot:
    turn_index: int
    rules: dict
    status: dict
    available_problems: tuple
    rankings: str

    def to_dict(self) -> dict:
        return {
            "type": "state",
            "turn_index": self.turn_index,
            "rules": self.rules,
            "status": self.status,
            "available_problems": list(self.available_problems),
            "rankings": self.rankings,
            "available_actions": [k.value for k in ActionKind],
        }


@dataclass
class ActionResult:
    ok: bool
    payload: dict = field(default_factory=dict)
    charged: int = 0
    error: Optional[ProtocolError] = None
    terminated: bool = False

    def to_dict(self) -> dict:
        out = {
            "type": "result",
            "ok": self.ok,
            "payload": self.payload,
            "charged": self.charged,
            "terminated": self.terminated,
        }
        if self.error:
            out["error"] = {"code": self.error.code, "message": self.error.message}
        return out


class Session:
    """One participant's strictly sequential turn loop."""

    def __init__(self, contest: Contest, participant: ParticipantState,
                 price: ModelPrice = ModelPrice(1.0, 1.0),
                 corpora: Optional[HintCorpora] = None,
                 rivals: Optional[Callable] = None,
                 clock: Callable[[], float] = time.monotonic,
                 judge_fn=None,
                 visible_problems=None):
        self.contest = contest
        self.config = contest.config
        self.participant = participant
        self.price = price
        self.corpora = corpora
        self.rivals = rivals or (lambda: [participant])
        self.clock = clock
        self.judge_fn = judge_fn or (
            lambda problem, source, language: judge_mod.judge_submission(
                problem, source, language, self.config)
        )
        self.visible_problems = tuple(
            visible_problems if visible_problems is not None
            else contest.problems
        )
        self.start_time = clock()
        self.turn_index = 0
        self._seen_usage_keys: set = set()

    # -- state rendering ---------------------------------------------------

    def render_state(self) -> StateSnapshot:
        config = self.config
        ledger = self.participant.ledger
        rules = {
            "credit_limit": config.credit_limit,
            "score_weights": {lvl.label: w for lvl, w in config.score_weights.items()},
            "hint_costs": list(config.hint_costs),
            "test_cost": config.test_cost,
            "penalties": {v.value: c for v, c in config.penalty_schedule.items()},
            "languages": list(judge_mod.SUPPORTED_LANGUAGES),
        }
        status = {
            "name": self.participant.id,
            "consumed_credit": ledger.consumed_total(),
            "solved_problems": list(self.participant.solved),
            "score": score(self.participant.solved, self.contest, config),
            "penalty": ledger.consumed_total() - ledger.termination_total(),
        }
        rows = rank(self.rivals(), self.contest, config)
        return StateSnapshot(
            turn_index=self.turn_index,
            rules=rules,
            status=status,
            available_problems=self.visible_problems,
            rankings=render_rankings(rows),
        )

    # -- turn handling -----------------------------------------------------

    def _elapsed(self) -> float:
        return self.clock() - self.start_time

    def charge_usage(self, usage: Optional[dict]) -> int:
        if not usage:
            return 0
        key = usage.get("idempotency_key")
        if key is not None:
            if key in self._seen_usage_keys:
                return 0
            self._seen_usage_keys.add(key)
        return self.participant.ledger.charge_inference(
            int(usage.get("input_tokens", 0)),
            int(usage.get("output_tokens", 0)),
            self.price,
            self.turn_index,
            int(self._elapsed() * 1000),
        )

    def _finish_turn(self, result: ActionResult) -> ActionResult:
        ledger = self.participant.ledger
        ledger.accrue_time(self._elapsed(), self.config,
                           self.turn_index, int(self._elapsed() * 1000))
        if self.participant.active and ledger.is_terminated(self.config):
            self.participant.terminate()
            result.terminated = True
            result.payload.setdefault(
                "notice", "credit budget exhausted; participation terminated")
        self.turn_index += 1
        return result

    def step(self, raw_message) -> ActionResult:
        """Process one full turn: charge usage, parse, apply, settle time."""
        usage = None
        if isinstance(raw_message, dict):
            usage = raw_message.get("usage")
        t_before = self.participant.ledger.consumed_total()
        self.charge_usage(usage)

        if not self.participant.active:
            result = ActionResult(
                False, error=ProtocolError("not_active",
                                           "participant is no longer active"))
            result.charged = self.participant.ledger.consumed_total() - t_before
            return result

        parsed = parse_action(raw_message)
        if isinstance(parsed, ProtocolError):
            # A malformed turn wastes its inference cost but draws no penalty.
            result = ActionResult(False, error=parsed)
        else:
            result = self.apply_action(parsed)
        result = self._finish_turn(result)
        result.charged = self.participant.ledger.consumed_total() - t_before
        return result

    def apply_action(self, request: ActionRequest) -> ActionResult:
        if not self.participant.active:
            return ActionResult(False, error=ProtocolError(
                "not_active", "participant is no longer active"))
        handler = {
            ActionKind.VIEW_PROBLEM: self._do_view,
            ActionKind.GET_HINT: self._do_hint,
            ActionKind.SUBMIT_SOLUTION: self._do_submit,
            ActionKind.TEST_CODE: self._do_test,
            ActionKind.TERMINATE: self._do_terminate,
        }[request.action]
        return handler(request.parameters)

    def _problem(self, parameters):
        problem_id = parameters["problem_id"]
        if problem_id not in self.visible_problems:
            raise KeyError(problem_id)
        return self.contest.problem(problem_id)

    def _do_view(self, parameters) -> ActionResult:
        try:
            problem = self._problem(parameters)
        except KeyError:
            return ActionResult(False, error=ProtocolError(
                "unknown_problem", f"no such problem: {parameters['problem_id']}"))
        return ActionResult(True, payload={
            "problem_id": problem.id,
            "level": problem.level.label,
            "statement": problem.statement,
            "samples": [
                {"input": c.input.decode("utf-8", "replace"),
                 "output": c.expected_output.decode("utf-8", "replace")}
                for c in problem.samples
            ],
            "time_limit_ms": problem.time_limit_ms,
            "memory_limit_mib": problem.memory_limit_mib,
        })

    def _do_hint(self, parameters) -> ActionResult:
        if self.corpora is None:
            return ActionResult(False, error=ProtocolError(
                "no_corpora", "this contest ships no hint corpora"))
        difficulty = parameters.get("problem_difficulty")
        try:
            request = HintRequest(
                level=int(parameters["hint_level"]),
                problem_id=parameters.get("problem_id"),
                hint_knowledge=parameters.get("hint_knowledge"),
                problem_difficulty=(DifficultyLevel.parse(difficulty)
                                    if difficulty else None),
            )
            response = get_hint(
                request, self.contest, self.corpora, self.config,
                ledger=self.participant.ledger, turn_index=self.turn_index,
                t_ms=int(self._elapsed() * 1000),
            )
        except (HintError, ValueError) as exc:
            return ActionResult(False, error=ProtocolError(
                "missing_parameter", str(exc)))
        except KeyError as exc:
            return ActionResult(False, error=ProtocolError(
                "unknown_problem", str(exc)))
        return ActionResult(True, payload={"hint": response.to_dict()})

    def _do_test(self, parameters) -> ActionResult:
        try:
            problem = self._problem(parameters)
        except KeyError:
            return ActionResult(False, error=ProtocolError(
                "unknown_problem", f"no such problem: {parameters['problem_id']}"))
        language = parameters["language"]
        if language not in judge_mod.SUPPORTED_LANGUAGES:
            return ActionResult(False, error=ProtocolError(
                "unsupported_language", f"language {language!r} not allowed"))
        cases = parameters["cases"]
        if not isinstance(cases, list) or not cases:
            return ActionResult(False, error=ProtocolError(
                "missing_parameter", "cases must be a non-empty list"))
        if len(cases) > self.config.max_custom_cases:
            return ActionResult(False, error=ProtocolError(
                "too_many_cases",
                f"at most {self.config.max_custom_cases} cases per request"))
        self.participant.ledger.charge_test(
            self.config, len(cases), self.turn_index,
            int(self._elapsed() * 1000))
        result = judge_mod.run_custom_tests(
            parameters["source"].encode(), language,
            [c.encode() for c in cases],
            judge_mod.Limits.for_problem(problem), self.config,
        )
        return ActionResult(True, payload={
            "compiled": result.compiled,
            "diagnostics": result.diagnostics,
            "outcomes": [o.to_dict() for o in result.outcomes],
        })

    def _do_submit(self, parameters) -> ActionResult:
        from .model import SubmissionRecord

        try:
            problem = self._problem(parameters)
        except KeyError:
            return ActionResult(False, error=ProtocolError(
                "unknown_problem", f"no such problem: {parameters['problem_id']}"))
        language = parameters["language"]
        if language not in judge_mod.SUPPORTED_LANGUAGES:
            return ActionResult(False, error=ProtocolError(
                "unsupported_language", f"language {language!r} not allowed"))
        if problem.id in self.participant.solved:
            # Cheap rejection: no judging, no charge, no penalty.
            return ActionResult(False, error=ProtocolError(
                "already_solved", f"{problem.id} is already solved"))

        source = parameters["source"].encode()
        judged = self.judge_fn(problem, source, language)
        self.participant.submissions.append(SubmissionRecord(
            problem_id=problem.id,
            turn_index=self.turn_index,
            verdict=judged.verdict,
            passed=judged.passed,
            total=judged.total,
            language_id=language,
            source_hash=judge_mod.source_hash(source),
        ))
        if judged.verdict is Verdict.AC:
            self.participant.mark_solved(problem.id)
        else:
            self.participant.ledger.add_penalty(
                judged.verdict, self.config, self.turn_index,
                int(self._elapsed() * 1000))
        return ActionResult(judged.verdict is Verdict.AC,
                            payload={"judge": judged.to_dict()})

    def _do_terminate(self, parameters) -> ActionResult:
        self.participant.withdraw()
        return ActionResult(True, payload={"acknowledged": True})


# -- transports ------------------------------------------------------------

def _write_line(stream, message: dict) -> None:
    stream.write(json.dumps(message) + "\n")
    stream.flush()


def _serve_streams(session: Session, reader, writer) -> None:
    """Drive one session over line-delimited JSON streams until it ends."""
    while session.participant.active:
        _write_line(writer, session.render_state().to_dict())
        line = reader.readline()
        if not line:
            break
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            message = line  # parse_action will classify it as malformed
        if isinstance(message, dict) and message.get("type") == "usage":
            charged = session.charge_usage(message)
            _write_line(writer, {
                "type": "usage_ack",
                "charged": charged,
                "consumed_credit": session.participant.ledger.consumed_total(),
            })
            continue
        result = session.step(message)
        payload = result.to_dict()
        payload["consumed_credit"] = session.participant.ledger.consumed_total()
        _write_line(writer, payload)
    _write_line(writer, {
        "type": "end",
        "reason": session.participant.status.value,
        "consumed_credit": session.participant.ledger.consumed_total(),
    })


def serve_stdio(session: Session) -> None:
    _serve_streams(session, sys.stdin, sys.stdout)


def serve_tcp(session_factory, host: str = "127.0.0.1", port: int = 0):
    """Serve sessions over TCP; one session per connection.

    Returns the bound server (call ``serve_forever`` / ``shutdown``).
    """

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            session = session_factory()
            self.request.settimeout(session.config.agent_turn_timeout)
            import io
            text_reader = io.TextIOWrapper(self.rfile, encoding="utf-8")
            text_writer = io.TextIOWrapper(self.wfile, encoding="utf-8")
            try:
                _serve_streams(session, text_reader, text_writer)
            except (ConnectionError, TimeoutError, OSError):
                pass

    class Server(socketserver.ThreadingTCPServer):
        allow_reuse_address = True
        daemon_threads = True

    return Server((host, port), Handler)
