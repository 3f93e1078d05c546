"""Exception types shared across the analyzer.

Every failure the pipeline can survive is reported as a diagnostic on the
parse result instead of an exception; the types here are reserved for
conditions that abort analysis of one input (or one batch item).
"""

from __future__ import annotations


class ReentriageError(Exception):
    """Base class for all analyzer errors."""


class UnreadableInput(ReentriageError):
    """Input bytes cannot be decoded as UTF-8 or exceed the size limit."""


class FatalSyntax(ReentriageError):
    """Source is damaged beyond statement-level recovery (brace imbalance)."""


class AnalysisTimeout(ReentriageError):
    """Per-file time budget exhausted; the batch continues without this file."""


class ConfigError(ReentriageError):
    """Invalid run configuration (unknown rule name, bad flag value, ...)."""


class CyclicInheritance(ReentriageError):
    """Contract inheritance graph contains a cycle; the contract is skipped."""


class FetchError(ReentriageError):
    """Base class for source-fetch failures."""


class NetworkError(FetchError):
    """Transport-level failure talking to the source explorer."""


class NotVerifiedError(FetchError):
    """The explorer has no verified source for the address."""


class RateLimitedError(FetchError):
    """The explorer rejected the request due to rate limiting."""
