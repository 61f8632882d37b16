from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Literal

CommonKnowledgeMode = Literal["components", "fixpoint", "crosscheck"]
LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]

DEFAULT_MAX_ROUNDS = 4


@dataclass(frozen=True)
class Settings:
    canonical_output: bool = False
    log_level: LogLevel = "WARNING"
    solver_workers: int = 1
    common_knowledge_mode: CommonKnowledgeMode = "components"
    seed: int | None = None
    max_rounds: int = DEFAULT_MAX_ROUNDS

    @classmethod
    def from_env(cls) -> Settings:
        return cls(
            canonical_output=_parse_bool(os.getenv("EPISOLVE_CANON")),
            log_level=_parse_log_level(os.getenv("EPISOLVE_LOG_LEVEL")),
            solver_workers=_parse_positive_int(
                os.getenv("EPISOLVE_SOLVER_WORKERS"),
                name="EPISOLVE_SOLVER_WORKERS",
                default=1,
            ),
            common_knowledge_mode=_parse_ck_mode(os.getenv("EPISOLVE_CK_MODE")),
            seed=_parse_optional_int(os.getenv("EPISOLVE_SEED"), name="EPISOLVE_SEED"),
            max_rounds=_parse_positive_int(
                os.getenv("EPISOLVE_MAX_ROUNDS"),
                name="EPISOLVE_MAX_ROUNDS",
                default=DEFAULT_MAX_ROUNDS,
            ),
        )


def _parse_bool(value: str | None) -> bool:
    if value is None:
        return False
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _parse_log_level(value: str | None) -> LogLevel:
    if value is None or not value.strip():
        return "WARNING"

    normalized = value.strip().upper()
    if normalized == "DEBUG":
        return "DEBUG"
    if normalized == "INFO":
        return "INFO"
    if normalized == "WARNING":
        return "WARNING"
    if normalized == "ERROR":
        return "ERROR"

    raise RuntimeError(
        "Invalid EPISOLVE_LOG_LEVEL. Expected 'DEBUG', 'INFO', 'WARNING', or 'ERROR'."
    )


def _parse_ck_mode(value: str | None) -> CommonKnowledgeMode:
    if value is None or not value.strip():
        return "components"

    normalized = value.strip().lower()
    if normalized == "components":
        return "components"
    if normalized == "fixpoint":
        return "fixpoint"
    if normalized == "crosscheck":
        return "crosscheck"

    raise RuntimeError(
        "Invalid EPISOLVE_CK_MODE. Expected 'components', 'fixpoint', or 'crosscheck'."
    )


def _parse_optional_int(value: str | None, *, name: str) -> int | None:
    if value is None or not value.strip():
        return None
    try:
        return int(value.strip())
    except ValueError as exc:
        raise RuntimeError(f"Invalid {name}. Expected an integer.") from exc


def _parse_positive_int(value: str | None, *, name: str, default: int) -> int:
    parsed = _parse_optional_int(value, name=name)
    if parsed is None:
        return default
    if parsed < 1:
        raise RuntimeError(f"Invalid {name}. Expected a positive integer.")
    return parsed
