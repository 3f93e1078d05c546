"""Download verified contract source from a block explorer API.

Talks to an Etherscan-compatible getsourcecode endpoint. The API key is
read from an environment variable (EXPLORER_API_KEY by default), never
from a flag, so it cannot leak into shell history or process listings.
Writes are atomic: the .sol and its metadata sidecar appear complete or
not at all.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import httpx

from .config import FetchConfig
from .errors import (
    ConfigError, NetworkError, NotVerifiedError, RateLimitedError,
)
from .report import utc_timestamp

ADDRESS_RE = re.compile(r"^0x[0-9a-fA-F]{40}$")


def validate_address(address: str) -> str:
    if not ADDRESS_RE.match(address):
        raise ConfigError(
            f"not a contract address: {address!r} "
            f"(expected 0x followed by 40 hex digits)")
    return address.lower()


@dataclass(frozen=True)
class FetchResult:
    source_path: Path
    metadata_path: Path
    contract_name: str


def _flatten_multi_source(raw: str) -> str:
    """Verified multi-file uploads come back as JSON wrapped in one or two
    brace pairs; merge the parts into a single compilable text."""
    body = raw.strip()
    if body.startswith("{{") and body.endswith("}}"):
        body = body[1:-1]
    doc = json.loads(body)
    sources = doc.get("sources", doc)
    pieces = []
    for name in sorted(sources):
        entry = sources[name]
        content = entry.get("content", "") if isinstance(entry, dict) else ""
        pieces.append(f"// file: {name}\n{content.rstrip()}\n")
    return "\n".join(pieces)


def _request(address: str, cfg: FetchConfig) -> dict:
    params = {"module": "contract", "action": "getsourcecode",
              "address": address}
    api_key = os.environ.get(cfg.api_key_env)
    if api_key:
        params["apikey"] = api_key
    last_error: Exception | None = None
    for attempt in range(cfg.retries + 1):
        if attempt:
            time.sleep(cfg.backoff_seconds * attempt)
        try:
            response = httpx.get(cfg.endpoint, params=params,
                                 timeout=cfg.timeout_seconds)
        except httpx.HTTPError as exc:
            last_error = exc
            continue
        if response.status_code == 429:
            raise RateLimitedError(f"{cfg.endpoint} rate limited the request")
        if response.status_code >= 500:
            last_error = NetworkError(
                f"server error {response.status_code} from {cfg.endpoint}")
            continue
        if response.status_code != 200:
            raise NetworkError(
                f"unexpected status {response.status_code} from "
                f"{cfg.endpoint}")
        try:
            return response.json()
        except ValueError as exc:
            raise NetworkError(f"non-JSON response from {cfg.endpoint}") \
                from exc
    raise NetworkError(f"request failed after {cfg.retries + 1} attempts: "
                       f"{last_error}")


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def fetch_source(address: str, dest_dir: str | Path,
                 cfg: FetchConfig | None = None) -> FetchResult:
    cfg = cfg or FetchConfig()
    address = validate_address(address)  # before any network traffic
    dest = Path(dest_dir)
    dest.mkdir(parents=True, exist_ok=True)

    payload = _request(address, cfg)
    result = payload.get("result")
    if isinstance(result, str):
        if "rate limit" in result.lower():
            raise RateLimitedError(result)
        raise NetworkError(f"explorer error: {result}")
    if not isinstance(result, list) or not result:
        raise NetworkError("explorer returned no result entry")
    entry = result[0]
    raw = entry.get("SourceCode") or ""
    if not raw.strip():
        raise NotVerifiedError(
            f"no verified source published for {address}")
    if raw.lstrip().startswith("{"):
        try:
            text = _flatten_multi_source(raw)
        except (ValueError, KeyError) as exc:
            raise NetworkError(
                f"could not decode multi-file source bundle: {exc}") from exc
    else:
        text = raw
    if not text.endswith("\n"):
        text += "\n"

    source_path = dest / f"{address}.sol"
    metadata_path = dest / f"{address}.json"
    name = entry.get("ContractName") or ""
    _atomic_write(source_path, text)
    _atomic_write(metadata_path, json.dumps({
        "address": address,
        "contract_name": name,
        "compiler_version": entry.get("CompilerVersion", ""),
        "fetched_at": utc_timestamp(),
        "endpoint": cfg.endpoint,
    }, indent=2) + "\n")
    return FetchResult(source_path, metadata_path, name)
