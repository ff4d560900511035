"""Sandboxed judge: compile, run under resource limits, classify verdicts.

Portable baseline isolation: fresh scratch directory, scrubbed environment,
POSIX rlimits for CPU/memory/output, wall-clock kill at 2x the CPU limit.
Where ``unshare`` user+network namespaces are available the child also runs
with networking disabled.
"""

from __future__ import annotations

import hashlib
import os
import resource
import shutil
import signal
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .model import Problem, TestCase, Verdict

SUPPORTED_LANGUAGES = ("cpp17", "java", "python3")

COMPILE_TIMEOUT_S = 30
WALL_GRACE_FACTOR = 2
OUTPUT_CAP_BYTES = 1 << 20

_MEMORY_MARKERS = (b"MemoryError", b"bad_alloc", b"OutOfMemoryError")


class UnsupportedLanguageError(ValueError):
    """Submission language outside the contest's allowed set."""


class ToolchainMissingError(RuntimeError):
    """Host lacks the compiler/interpreter; a configuration error, not CE."""


class SandboxError(RuntimeError):
    """Sandbox setup failed; infrastructure, not a verdict."""


@dataclass(frozen=True)
class Limits:
    time_limit_ms: int = 2000
    memory_limit_mib: int = 256

    @classmethod
    def for_problem(cls, problem: Problem) -> "Limits":
        return cls(problem.time_limit_ms, problem.memory_limit_mib)


@dataclass(frozen=True)
class RunOutcome:
    exit: str  # ok | timeout | memory_exceeded | crashed
    stdout: bytes
    cpu_ms: int
    peak_mem_mib: int
    stderr: bytes = b""

    def to_dict(self) -> dict:
        return {
            "exit": self.exit,
            "stdout": self.stdout.decode("utf-8", "replace"),
            "cpu_ms": self.cpu_ms,
            "peak_mem_mib": self.peak_mem_mib,
        }


@dataclass(frozen=True)
class Artifact:
    language: str
    workdir: Path
    command: tuple


@dataclass(frozen=True)
class CompileFailure:
    diagnostics: str


@dataclass(frozen=True)
class JudgeResult:
    verdict: Verdict
    passed: int
    total: int
    per_case: tuple = ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "passed": self.passed,
            "total": self.total,
            "per_case": [
                {"case_index": i, "outcome": o} for i, o in self.per_case
            ],
        }


@dataclass(frozen=True)
class CustomTestResult:
    compiled: bool
    diagnostics: str
    outcomes: tuple


def normalize_output(data: bytes) -> list[bytes]:
    """Strip trailing whitespace per line and trailing blank lines."""
    lines = [line.rstrip() for line in data.split(b"\n")]
    while lines and not lines[-1]:
        lines.pop()
    return lines


def outputs_match(actual: bytes, expected: bytes) -> bool:
    return normalize_output(actual) == normalize_output(expected)


def source_hash(source: bytes) -> str:
    return hashlib.sha256(source).hexdigest()[:16]


def _unshare_prefix() -> list:
    global _UNSHARE
    if _UNSHARE is None:
        _UNSHARE = False
        if os.environ.get("ARENA_NO_UNSHARE") != "1" and shutil.which("unshare"):
            probe = subprocess.run(
                ["unshare", "-rn", "true"], capture_output=True, timeout=10
            )
            _UNSHARE = probe.returncode == 0
    return ["unshare", "-rn"] if _UNSHARE else []


_UNSHARE = None


def compile_submission(source: bytes, language: str, workdir=None):
    """Produce a runnable Artifact, or CompileFailure carrying diagnostics."""
    if language not in SUPPORTED_LANGUAGES:
        raise UnsupportedLanguageError(language)
    workdir = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="arena-job-"))
    workdir.mkdir(parents=True, exist_ok=True)

    if language == "python3":
        interp = shutil.which("python3")
        if not interp:
            raise ToolchainMissingError("python3 not on PATH")
        src = workdir / "main.py"
        src.write_bytes(source)
        check = subprocess.run(
            [interp, "-m", "py_compile", str(src)],
            capture_output=True, timeout=COMPILE_TIMEOUT_S,
        )
        if check.returncode != 0:
            return CompileFailure(check.stderr.decode("utf-8", "replace"))
        shutil.rmtree(workdir / "__pycache__", ignore_errors=True)
        return Artifact(language, workdir, (interp, "main.py"))

    if language == "cpp17":
        gxx = shutil.which("g++")
        if not gxx:
            raise ToolchainMissingError("g++ not on PATH")
        src = workdir / "main.cpp"
        src.write_bytes(source)
        build = subprocess.run(
            [gxx, "-O2", "-std=gnu++17", "-o", "main", "main.cpp"],
            cwd=workdir, capture_output=True, timeout=COMPILE_TIMEOUT_S,
        )
        if build.returncode != 0:
            return CompileFailure(build.stderr.decode("utf-8", "replace"))
        return Artifact(language, workdir, ("./main",))

    # java
    javac = shutil.which("javac")
    java = shutil.which("java")
    if not javac or not java:
        raise ToolchainMissingError("javac/java not on PATH")
    src = workdir / "Main.java"
    src.write_bytes(source)
    build = subprocess.run(
        [javac, "Main.java"], cwd=workdir, capture_output=True,
        timeout=COMPILE_TIMEOUT_S,
    )
    if build.returncode != 0:
        return CompileFailure(build.stderr.decode("utf-8", "replace"))
    return Artifact(language, workdir, (java, "-Xss64m", "Main"))


def _make_preexec(limits: Limits, language: str):
    cpu_s = max(1, (limits.time_limit_ms + 999) // 1000)
    mem_bytes = limits.memory_limit_mib * (1 << 20)

    def preexec():
        os.setsid()
        resource.setrlimit(resource.RLIMIT_CPU, (cpu_s, cpu_s + 1))
        resource.setrlimit(resource.RLIMIT_FSIZE,
                           (OUTPUT_CAP_BYTES, OUTPUT_CAP_BYTES))
        resource.setrlimit(resource.RLIMIT_NOFILE, (64, 64))
        if language != "java":  # the JVM manages its own heap via -Xmx
            resource.setrlimit(resource.RLIMIT_AS, (mem_bytes, mem_bytes))

    return preexec


def run_case(artifact: Artifact, input_bytes: bytes, limits: Limits) -> RunOutcome:
    """Execute one case in the sandbox and classify the raw outcome."""
    command = list(artifact.command)
    if artifact.language == "java":
        command = [command[0], f"-Xmx{limits.memory_limit_mib}m", *command[1:]]
    command = _unshare_prefix() + command

    env = {"PATH": "/usr/bin:/bin", "HOME": str(artifact.workdir)}
    wall_limit_s = WALL_GRACE_FACTOR * limits.time_limit_ms / 1000.0
    started = time.monotonic()
    try:
        proc = subprocess.Popen(
            command, cwd=artifact.workdir, env=env,
            stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            preexec_fn=_make_preexec(limits, artifact.language),
        )
    except OSError as exc:
        raise SandboxError(f"failed to spawn sandbox process: {exc}") from exc

    timed_out = False
    try:
        stdout, stderr = proc.communicate(input_bytes, timeout=wall_limit_s)
    except subprocess.TimeoutExpired:
        timed_out = True
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except (ProcessLookupError, PermissionError):
            proc.kill()
        stdout, stderr = proc.communicate()
    elapsed_ms = int((time.monotonic() - started) * 1000)
    stdout = stdout[:OUTPUT_CAP_BYTES]

    rss_kib = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    peak_mem_mib = rss_kib // 1024

    if timed_out or -proc.returncode == signal.SIGXCPU:
        kind = "timeout"
    elif proc.returncode == 0:
        kind = "ok"
    elif any(marker in stderr for marker in _MEMORY_MARKERS):
        kind = "memory_exceeded"
    elif -proc.returncode == signal.SIGKILL and elapsed_ms >= limits.time_limit_ms:
        kind = "timeout"
    else:
        kind = "crashed"
    return RunOutcome(kind, stdout, elapsed_ms, peak_mem_mib, stderr[:4096])


_FAIL_VERDICT = {
    "timeout": Verdict.TLE,
    "memory_exceeded": Verdict.MLE,
    "crashed": Verdict.RE,
}


def judge_submission(problem: Problem, source: bytes, language: str,
                     config=None, run_all_cases: bool = False) -> JudgeResult:
    """Run the hidden tests in order; all-or-nothing acceptance.

    Stops at the first failing case unless run_all_cases (or the config
    flag) asks for a full diagnostic run. ``passed`` is the length of the
    passing prefix.
    """
    if config is not None:
        run_all_cases = run_all_cases or config.run_all_cases
    limits = Limits.for_problem(problem)
    total = len(problem.hidden_tests)

    workdir = Path(tempfile.mkdtemp(prefix="arena-job-"))
    try:
        compiled = compile_submission(source, language, workdir)
        if isinstance(compiled, CompileFailure):
            return JudgeResult(Verdict.CE, 0, total)

        per_case = []
        passed = 0
        verdict = Verdict.AC
        for index, case in enumerate(problem.hidden_tests):
            outcome = run_case(compiled, case.input, limits)
            if outcome.exit == "ok" and outputs_match(
                    outcome.stdout, case.expected_output):
                per_case.append((index, "ok"))
                if verdict is Verdict.AC:
                    passed += 1
                continue
            case_verdict = (_FAIL_VERDICT.get(outcome.exit, Verdict.WA)
                            if outcome.exit != "ok" else Verdict.WA)
            per_case.append((index, case_verdict.value))
            if verdict is Verdict.AC:
                verdict = case_verdict
            if not run_all_cases:
                break
        return JudgeResult(verdict, passed, total, tuple(per_case))
    finally:
        shutil.rmtree(workdir, ignore_errors=True)


def run_custom_tests(source: bytes, language: str, inputs,
                     limits: Limits, config=None) -> CustomTestResult:
    """Run participant-supplied inputs; raw outcomes only, never hidden data."""
    inputs = list(inputs)
    if not inputs:
        raise ValueError("custom test request needs at least one input")
    if config is not None and len(inputs) > config.max_custom_cases:
        raise ValueError(
            f"too many custom cases: {len(inputs)} > {config.max_custom_cases}"
        )
    workdir = Path(tempfile.mkdtemp(prefix="arena-job-"))
    try:
        compiled = compile_submission(source, language, workdir)
        if isinstance(compiled, CompileFailure):
            return CustomTestResult(False, compiled.diagnostics, ())
        outcomes = tuple(run_case(compiled, data, limits) for data in inputs)
    finally:
        shutil.rmtree(workdir, ignore_errors=True)
    return CustomTestResult(True, "", outcomes)


def judge_parallel(jobs, workers: int = 4):
    """Judge (problem, source, language) jobs on a bounded worker pool."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(judge_submission, problem, source, language)
            for problem, source, language in jobs
        ]
        return [f.result() for f in futures]
