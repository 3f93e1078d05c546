"""Cooperative per-file time budget.

A Deadline is threaded through the lexer, parser and pipeline stages; each
hot loop calls check() cheaply. No threads, no signals: a file that blows
its budget raises AnalysisTimeout at the next checkpoint and the batch
moves on.
"""

from __future__ import annotations

import time

from .errors import AnalysisTimeout


class Deadline:
    __slots__ = ("_expires_at",)

    def __init__(self, seconds: float | None):
        self._expires_at = None if seconds is None else time.monotonic() + seconds

    @classmethod
    def unlimited(cls) -> "Deadline":
        return cls(None)

    def expired(self) -> bool:
        return self._expires_at is not None and time.monotonic() > self._expires_at

    def check(self) -> None:
        if self.expired():
            raise AnalysisTimeout("analysis time budget exhausted")
