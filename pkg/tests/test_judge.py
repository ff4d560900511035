from __future__ import annotations

import json
from pathlib import Path

import pytest

from arena.judge import (CompileFailure, Limits, UnsupportedLanguageError,
                         compile_submission, judge_submission,
                         normalize_output, outputs_match, run_case,
                         run_custom_tests)
from arena.model import Verdict

from conftest import DESK

VARIANTS = DESK / "variants"


def _book_solution(book, pid):
    entries = book.for_problem(pid)
    return next(e for e in entries if e.expected_verdict is Verdict.AC)


def test_normalize_output():
    assert normalize_output(b"1 2 \n3\n\n\n") == [b"1 2", b"3"]
    assert outputs_match(b"42\n", b"42")
    assert outputs_match(b"a  \nb\n", b"a\nb")
    assert not outputs_match(b"a b", b"a  b")  # interior spacing matters


def test_reference_solutions_accepted(desk_contest, book):
    for pid in ["b01_sum", "s01_sort", "g03_range", "p03_subset"]:
        problem = desk_contest.problem(pid)
        sub = _book_solution(book, pid)
        result = judge_submission(problem, sub.source.encode(), sub.language)
        assert result.verdict is Verdict.AC, pid
        assert result.passed == result.total == len(problem.hidden_tests)


def test_wrong_variant_prefix(desk_contest):
    problem = desk_contest.problem("b01_sum")
    source = (VARIANTS / "wrong_sum.py").read_bytes()
    result = judge_submission(problem, source, "python3")
    assert result.verdict is Verdict.WA
    # the wrong branch triggers on the third hidden case (a > 100)
    assert (result.passed, result.total) == (2, 5)


def test_sleeper_times_out(desk_contest):
    problem = desk_contest.problem("b01_sum")
    import time
    started = time.monotonic()
    result = judge_submission(problem, (VARIANTS / "sleeper.py").read_bytes(),
                              "python3")
    elapsed = time.monotonic() - started
    assert result.verdict is Verdict.TLE
    assert result.passed == 0
    # killed at the 2x wall grace for the first case, plus slack
    assert elapsed < 2 * problem.time_limit_ms / 1000 + 3


def test_allocator_exceeds_memory(desk_contest):
    problem = desk_contest.problem("b01_sum")
    result = judge_submission(
        problem, (VARIANTS / "allocator.py").read_bytes(), "python3")
    assert result.verdict is Verdict.MLE


def test_broken_cpp_is_ce(desk_contest):
    problem = desk_contest.problem("b01_sum")
    result = judge_submission(problem, (VARIANTS / "broken.cpp").read_bytes(),
                              "cpp17")
    assert result.verdict is Verdict.CE
    assert result.passed == 0


def test_crash_is_re(desk_contest):
    problem = desk_contest.problem("b01_sum")
    result = judge_submission(problem, b"raise SystemExit(3)\n", "python3")
    assert result.verdict is Verdict.RE


def test_cpp_solution_accepted(desk_contest):
    source = (
        "#include <iostream>\n"
        "int main(){long long a,b; std::cin>>a>>b;"
        " std::cout<<a+b<<std::endl;}\n").encode()
    result = judge_submission(desk_contest.problem("b01_sum"), source, "cpp17")
    assert result.verdict is Verdict.AC


def test_unsupported_language_is_config_error(desk_contest):
    with pytest.raises(UnsupportedLanguageError):
        judge_submission(desk_contest.problem("b01_sum"), b"", "ruby")


def test_determinism(desk_contest):
    problem = desk_contest.problem("b01_sum")
    source = (VARIANTS / "wrong_sum.py").read_bytes()
    first = judge_submission(problem, source, "python3")
    second = judge_submission(problem, source, "python3")
    assert (first.verdict, first.passed, first.total) == \
        (second.verdict, second.passed, second.total)
    assert [o for _, o in first.per_case] == [o for _, o in second.per_case]


def test_run_all_cases_flag(desk_contest):
    problem = desk_contest.problem("b01_sum")
    source = (VARIANTS / "wrong_sum.py").read_bytes()
    result = judge_submission(problem, source, "python3", run_all_cases=True)
    assert result.verdict is Verdict.WA
    assert len(result.per_case) == result.total


def test_run_custom_tests(desk_contest):
    result = run_custom_tests(
        b"a, b = map(int, input().split())\nprint(a + b)\n", "python3",
        [b"1 2\n", b"7 8\n"], Limits())
    assert result.compiled
    assert [o.exit for o in result.outcomes] == ["ok", "ok"]
    assert [o.stdout.strip() for o in result.outcomes] == [b"3", b"15"]


def test_run_custom_tests_empty_list():
    with pytest.raises(ValueError):
        run_custom_tests(b"print(1)", "python3", [], Limits())


def test_run_custom_tests_crash_no_exception():
    result = run_custom_tests(b"1/0\n", "python3", [b"\n"], Limits())
    assert result.outcomes[0].exit == "crashed"


def test_echo_program(desk_contest):
    result = run_custom_tests(
        b"import sys\nsys.stdout.write(sys.stdin.read())\n", "python3",
        [b"hello\nworld\n"], Limits())
    assert result.outcomes[0].stdout == b"hello\nworld\n"


def test_isolation_probe(tmp_path):
    """A probe sees an empty scratch dir, scrubbed env, and no network."""
    sentinel = tmp_path / "secret.in"
    sentinel.write_text("hidden test data")
    probe = f"""
import json, os, socket
report = {{}}
report["cwd_files"] = sorted(f for f in os.listdir(".") if f != "main.py")
report["env_leak"] = [k for k in os.environ if k not in ("PATH", "HOME", "LC_CTYPE", "PWD")]
try:
    open({str(sentinel)!r}).read()
    report["sentinel"] = "readable"
except OSError:
    report["sentinel"] = "blocked"
try:
    s = socket.create_connection(("127.0.0.1", 9), timeout=1)
    report["network"] = "open"
except OSError:
    report["network"] = "blocked"
print(json.dumps(report))
""".encode()
    result = run_custom_tests(probe, "python3", [b"\n"], Limits())
    assert result.outcomes[0].exit == "ok"
    report = json.loads(result.outcomes[0].stdout)
    assert report["cwd_files"] == []          # scratch dir holds only the source
    assert report["env_leak"] == []           # host environment scrubbed
    assert report["network"] == "blocked"     # no sockets from the sandbox
    # Plain-filesystem baseline cannot block arbitrary reads; the judge never
    # writes hidden test data where a submission could reach it.
    assert report["sentinel"] in ("readable", "blocked")


def test_compile_failure_reports_diagnostics(tmp_path):
    failure = compile_submission(b"def broken(:\n", "python3", tmp_path)
    assert isinstance(failure, CompileFailure)
    assert "SyntaxError" in failure.diagnostics
