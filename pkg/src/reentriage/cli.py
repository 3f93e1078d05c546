"""Command line interface.

Runs in process by default; --server posts the same payloads to a
running service instead, so results match either way.

Exit codes: 0 success, 1 analysis failed or findings with
--fail-on-finding, 2 bad usage or configuration, 3 network trouble,
4 source not verified, 5 rate limited.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .config import DEFAULT_TIMEOUT_SECONDS, FetchConfig
from .errors import (
    ConfigError, NetworkError, NotVerifiedError, RateLimitedError,
)
from .report import render_single, render_text, report_json
from .schemas import AnalyzeRequest, BenchRequest

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NETWORK = 3
EXIT_NOT_VERIFIED = 4
EXIT_RATE_LIMITED = 5


def _post(server: str, route: str, payload: dict) -> dict:
    url = server.rstrip("/") + route
    try:
        response = httpx.post(url, json=payload, timeout=600.0)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach {url}: {exc}", err=True)
        sys.exit(EXIT_NETWORK)
    if response.status_code == 422:
        detail = response.json().get("detail", response.text)
        click.echo(f"error: {detail}", err=True)
        sys.exit(EXIT_USAGE)
    if response.status_code != 200:
        click.echo(f"error: {url} answered {response.status_code}", err=True)
        sys.exit(EXIT_NETWORK)
    return response.json()


def _common_options(fn):
    fn = click.option("--rules", default=None, metavar="NAMES",
                      help="comma separated cause rules to apply; "
                           "default all, empty string disables triage")(fn)
    fn = click.option("--call-kinds", default=None, metavar="KINDS",
                      help="call kinds to treat as external")(fn)
    fn = click.option("--timeout", "timeout_seconds", type=float,
                      default=DEFAULT_TIMEOUT_SECONDS, show_default=True,
                      help="per file analysis budget in seconds")(fn)
    fn = click.option("--no-bare", is_flag=True,
                      help="only flag calls followed by state writes")(fn)
    fn = click.option("--json", "as_json", is_flag=True,
                      help="print the JSON document instead of text")(fn)
    fn = click.option("--fail-on-finding", is_flag=True,
                      help="exit 1 when anything is reported")(fn)
    fn = click.option("--server", default=None, metavar="URL",
                      help="send the request to a running service")(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="reentriage")
def main() -> None:
    """Reentrancy candidate detection and false positive triage for
    Solidity sources."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False,
                                          path_type=Path))
@_common_options
def analyze(source: Path, rules, call_kinds, timeout_seconds, no_bare,
            as_json, fail_on_finding, server) -> None:
    """Analyze one Solidity file."""
    try:
        text = source.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_FAILED)
    request = AnalyzeRequest(source=text, path=str(source), rules=rules,
                             call_kinds=call_kinds, report_bare=not no_bare,
                             timeout_seconds=timeout_seconds)
    if server:
        payload = _post(server, "/analyze", request.model_dump())
    else:
        from .service import analyze_payload
        try:
            payload = analyze_payload(request)
        except ConfigError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
    if as_json:
        click.echo(report_json(payload), nl=False)
    else:
        click.echo(render_single(payload), nl=False)
    file_obj = payload["file"]
    if file_obj["status"] != "ok":
        sys.exit(EXIT_FAILED)
    if fail_on_finding and file_obj["reported_count"]:
        sys.exit(EXIT_FAILED)


@main.command()
@click.argument("corpus", required=False,
                type=click.Path(exists=True, file_okay=False,
                                path_type=Path))
@click.option("--no-dedupe", is_flag=True,
              help="analyze byte-identical duplicates too")
@_common_options
def bench(corpus: Path | None, no_dedupe, rules, call_kinds,
          timeout_seconds, no_bare, as_json, fail_on_finding,
          server) -> None:
    """Run a labeled corpus (default: the bundled samples) and print
    precision metrics."""
    request = BenchRequest(corpus_dir=str(corpus) if corpus else None,
                           rules=rules, call_kinds=call_kinds,
                           report_bare=not no_bare,
                           timeout_seconds=timeout_seconds,
                           dedupe=not no_dedupe)
    if server:
        payload = _post(server, "/bench", request.model_dump())
    else:
        from .service import bench_payload
        try:
            payload = bench_payload(request)
        except ConfigError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
    if as_json:
        click.echo(report_json(payload), nl=False)
    else:
        click.echo(render_text(payload), nl=False)
    if fail_on_finding and payload["metrics"]["reported_count"]:
        sys.exit(EXIT_FAILED)


@main.command()
@click.argument("address")
@click.option("--dest", type=click.Path(file_okay=False, path_type=Path),
              default=Path("fetched"), show_default=True,
              help="directory for the downloaded source")
@click.option("--endpoint", default=FetchConfig.endpoint, show_default=True,
              help="explorer getsourcecode endpoint")
@click.option("--api-key-env", default=FetchConfig.api_key_env,
              show_default=True,
              help="environment variable holding the API key")
def fetch(address: str, dest: Path, endpoint: str, api_key_env: str) -> None:
    """Download verified source for a contract address. The API key is
    taken from the named environment variable, never from a flag."""
    from .fetch import fetch_source
    cfg = FetchConfig(endpoint=endpoint, api_key_env=api_key_env)
    try:
        result = fetch_source(address, dest, cfg)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except RateLimitedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_RATE_LIMITED)
    except NotVerifiedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NOT_VERIFIED)
    except NetworkError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NETWORK)
    click.echo(f"wrote {result.source_path}")
    click.echo(f"wrote {result.metadata_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn
    uvicorn.run("reentriage.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
