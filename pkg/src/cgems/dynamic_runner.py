"""Compile checks, wall-clock timing and statement coverage via an external
runner process.

Analyzed code is never imported or executed in this process. Each call runs
the configured command in a fresh temporary directory with a pared-down
environment.
"""

from __future__ import annotations

import json
import os
import re
import statistics
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

PLACEHOLDER = "{source}"
MODES = ("check", "run", "coverage")
REFERENCE_RUNNER = Path(__file__).with_name("runners") / "python_runner.py"

ENV_ALLOWLIST = ("PATH", "LANG", "LC_ALL", "LC_CTYPE", "SYSTEMROOT", "TZ")

_ERROR_LINE = re.compile(r"^\s*\w*(Error|Exception)\b", re.MULTILINE)


class RunnerError(RuntimeError):
    """The runner itself could not be used (missing binary, bad protocol)."""


class ExecutionError(RuntimeError):
    def __init__(self, message: str, diagnostics: str = "") -> None:
        super().__init__(message)
        self.diagnostics = diagnostics


class RunnerTimeout(ExecutionError):
    pass


@dataclass(frozen=True)
class RunnerConfig:
    commands: dict[str, tuple[str, ...]]
    timeout_ms: int = 10_000
    max_output_bytes: int = 64 * 1024
    working_directory: str | None = None
    stdin_path: str | None = None
    env_allowlist: tuple[str, ...] = ENV_ALLOWLIST

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")
        for mode in MODES:
            argv = self.commands.get(mode)
            if not argv:
                raise ValueError(f"no command template for mode {mode!r}")
            if sum(arg.count(PLACEHOLDER) for arg in argv) != 1:
                raise ValueError(f"{mode} template needs exactly one {PLACEHOLDER} placeholder")

    @classmethod
    def default(cls, **overrides) -> RunnerConfig:
        commands = {mode: (sys.executable, str(REFERENCE_RUNNER), mode, PLACEHOLDER) for mode in MODES}
        return cls(commands=commands, **overrides)

    @classmethod
    def from_dict(cls, data: dict) -> RunnerConfig:
        substitutions = {"{python}": sys.executable, "{runner}": str(REFERENCE_RUNNER)}

        def expand(arg: str) -> str:
            for key, value in substitutions.items():
                arg = arg.replace(key, value)
            return arg

        commands = {mode: tuple(expand(a) for a in argv) for mode, argv in data["commands"].items()}
        kwargs = {k: v for k, v in data.items() if k != "commands"}
        if "env_allowlist" in kwargs:
            kwargs["env_allowlist"] = tuple(kwargs["env_allowlist"])
        return cls(commands=commands, **kwargs)

    @classmethod
    def load(cls, path: str | Path) -> RunnerConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class RunOutcome:
    mode: str
    ok: bool
    error_count: int = 0
    wall_time_us: float = 0.0
    executed_lines: set[int] = field(default_factory=set)
    executable_lines: set[int] = field(default_factory=set)
    diagnostics: str = ""
    stdout: str = ""


def _environment(cfg: RunnerConfig) -> dict[str, str]:
    env = {k: os.environ[k] for k in cfg.env_allowlist if k in os.environ}
    env["PYTHONDONTWRITEBYTECODE"] = "1"
    env["PYTHONHASHSEED"] = "0"
    return env


def _truncate(data: bytes, limit: int) -> str:
    return data[:limit].decode("utf-8", errors="replace")


def invoke(mode: str, source: str | Path, cfg: RunnerConfig) -> RunOutcome:
    """Run one mode of the runner on ``source`` and time it."""
    source = str(Path(source).resolve())
    if not Path(source).is_file():
        raise FileNotFoundError(source)
    argv = [arg.replace(PLACEHOLDER, source) for arg in cfg.commands[mode]]
    timeout = cfg.timeout_ms / 1000
    stdin = open(cfg.stdin_path, "rb") if cfg.stdin_path else subprocess.DEVNULL
    try:
        with tempfile.TemporaryDirectory(prefix="cgems-run-", dir=cfg.working_directory) as workdir:
            start = time.perf_counter_ns()
            try:
                proc = subprocess.run(
                    argv,
                    cwd=workdir,
                    env=_environment(cfg),
                    stdin=stdin,
                    capture_output=True,
                    timeout=timeout,
                )
            except FileNotFoundError as exc:
                raise RunnerError(f"runner not found: {argv[0]}") from exc
            except subprocess.TimeoutExpired as exc:
                elapsed = (time.perf_counter_ns() - start) / 1000
                raise RunnerTimeout(
                    f"{mode} timed out after {elapsed / 1000:.0f} ms",
                    _truncate(exc.stderr or b"", cfg.max_output_bytes),
                ) from None
            elapsed_us = (time.perf_counter_ns() - start) / 1000
    finally:
        if stdin is not subprocess.DEVNULL:
            stdin.close()
    return RunOutcome(
        mode=mode,
        ok=proc.returncode == 0,
        wall_time_us=elapsed_us,
        diagnostics=_truncate(proc.stderr, cfg.max_output_bytes),
        stdout=_truncate(proc.stdout, cfg.max_output_bytes),
    )


def check_compiles(source: str | Path, cfg: RunnerConfig) -> tuple[int, int]:
    """Return ``(compiling, error_count)``.

    An interpreter-style checker stops at the first error, so the count is
    usually 0 or 1.
    """
    try:
        outcome = invoke("check", source, cfg)
    except RunnerTimeout as exc:
        raise RunnerError(str(exc)) from exc
    if outcome.ok:
        return 1, 0
    return 0, max(1, len(_ERROR_LINE.findall(outcome.diagnostics)))


def measure_execution(source: str | Path, cfg: RunnerConfig, repeats: int = 3) -> float:
    """Median wall time in microseconds over ``repeats`` runs."""
    times = []
    for _ in range(repeats):
        outcome = invoke("run", source, cfg)
        if not outcome.ok:
            raise ExecutionError("program exited with an error", outcome.diagnostics)
        times.append(outcome.wall_time_us)
    return statistics.median(times)


def coverage_outcome(source: str | Path, cfg: RunnerConfig) -> RunOutcome:
    outcome = invoke("coverage", source, cfg)
    if not outcome.ok:
        raise ExecutionError("program exited with an error", outcome.diagnostics)
    try:
        report = json.loads(outcome.stdout.strip().splitlines()[-1])
        outcome.executed_lines = set(report["executed_lines"])
        outcome.executable_lines = set(report["executable_lines"])
    except (IndexError, KeyError, TypeError, ValueError) as exc:
        raise RunnerError("coverage mode did not print a JSON report") from exc
    return outcome


def coverage_percent(executed: set[int], executable: set[int]) -> float:
    if not executable:
        return 100.0
    return 100.0 * len(executed & executable) / len(executable)


def measure_coverage(source: str | Path, cfg: RunnerConfig) -> float:
    outcome = coverage_outcome(source, cfg)
    return coverage_percent(outcome.executed_lines, outcome.executable_lines)
