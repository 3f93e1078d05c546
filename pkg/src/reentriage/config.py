"""Run configuration shared by the CLI and the service."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .frontend import DEFAULT_MAX_SOURCE_BYTES
from .frontend.ast_nodes import CALL_KIND_NAMES
from .triage import CAUSE_NAMES, CauseType, TRIAGE_ORDER

# generous per-file budget; pathological inputs get cut off, real
# contracts finish orders of magnitude sooner
DEFAULT_TIMEOUT_SECONDS = 120.0


def parse_rules(text: str | None) -> tuple[CauseType, ...]:
    """Comma-separated cause names; None means all, "" means none."""
    if text is None:
        return TRIAGE_ORDER
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in CAUSE_NAMES:
            raise ConfigError(
                f"unknown rule {name!r}; valid: {', '.join(CAUSE_NAMES)}")
    wanted = set(names)
    return tuple(c for c in TRIAGE_ORDER if c.value in wanted)


def parse_call_kinds(text: str | None) -> frozenset[str]:
    if text is None:
        return frozenset(CALL_KIND_NAMES)
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ConfigError("at least one call kind is required")
    for name in names:
        if name not in CALL_KIND_NAMES:
            raise ConfigError(
                f"unknown call kind {name!r}; "
                f"valid: {', '.join(CALL_KIND_NAMES)}")
    return frozenset(names)


@dataclass(frozen=True)
class RunConfig:
    rules: tuple[CauseType, ...] = TRIAGE_ORDER
    call_kinds: frozenset[str] = frozenset(CALL_KIND_NAMES)
    report_bare: bool = True
    timeout_seconds: float | None = DEFAULT_TIMEOUT_SECONDS
    max_source_bytes: int = DEFAULT_MAX_SOURCE_BYTES
    dedupe: bool = True

    @classmethod
    def from_options(cls, *, rules: str | None = None,
                     call_kinds: str | None = None,
                     report_bare: bool = True,
                     timeout_seconds: float | None = DEFAULT_TIMEOUT_SECONDS,
                     max_source_bytes: int = DEFAULT_MAX_SOURCE_BYTES,
                     dedupe: bool = True) -> "RunConfig":
        if timeout_seconds is not None and timeout_seconds <= 0:
            raise ConfigError("timeout must be positive")
        if max_source_bytes <= 0:
            raise ConfigError("max source size must be positive")
        return cls(parse_rules(rules), parse_call_kinds(call_kinds),
                   report_bare, timeout_seconds, max_source_bytes, dedupe)


@dataclass(frozen=True)
class FetchConfig:
    endpoint: str = "https://api.etherscan.io/api"
    api_key_env: str = "EXPLORER_API_KEY"
    retries: int = 2
    backoff_seconds: float = 0.5
    timeout_seconds: float = 30.0
