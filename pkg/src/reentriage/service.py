"""HTTP front end.

Three routes: GET /health, POST /analyze (one source text), POST /bench
(a corpus directory, defaulting to the bundled samples). The payload
builders are plain functions so the CLI runs the exact same code in
process; the routes only add transport and error mapping.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException

from . import __version__
from .bundled import corpus_dir
from .config import RunConfig
from .corpus import load_labels, run_batch
from .errors import ConfigError
from .pipeline import analyze_source
from .report import file_result_obj, build_report
from .schemas import (
    AnalyzeRequest, AnalyzeResponse, BenchRequest, BenchResponse,
    HealthResponse,
)
from .timing import Deadline


def analyze_payload(req: AnalyzeRequest) -> dict:
    cfg = RunConfig.from_options(
        rules=req.rules, call_kinds=req.call_kinds,
        report_bare=req.report_bare, timeout_seconds=req.timeout_seconds)
    deadline = Deadline(cfg.timeout_seconds) if cfg.timeout_seconds \
        else Deadline.unlimited()
    analysis = analyze_source(
        req.path, req.source.encode("utf-8"), rules=cfg.rules,
        call_kinds=cfg.call_kinds, report_bare=cfg.report_bare,
        max_source_bytes=cfg.max_source_bytes, deadline=deadline)
    return {
        "rules_enabled": [c.value for c in cfg.rules],
        "file": file_result_obj(analysis),
    }


def bench_payload(req: BenchRequest) -> dict:
    cfg = RunConfig.from_options(
        rules=req.rules, call_kinds=req.call_kinds,
        report_bare=req.report_bare, timeout_seconds=req.timeout_seconds,
        dedupe=req.dedupe)
    directory = Path(req.corpus_dir) if req.corpus_dir else corpus_dir()
    if not directory.is_dir():
        raise ConfigError(f"not a directory: {directory}")
    paths = sorted(directory.glob("*.sol"))
    if not paths:
        raise ConfigError(f"no .sol files under {directory}")
    labels_path = directory / "labels.csv"
    labels = load_labels(labels_path) if labels_path.is_file() else None
    batch = run_batch(
        paths, labels, rules=cfg.rules, call_kinds=cfg.call_kinds,
        report_bare=cfg.report_bare, timeout_seconds=cfg.timeout_seconds,
        max_source_bytes=cfg.max_source_bytes, dedupe=cfg.dedupe)
    return build_report(batch, cfg.rules)


def create_app() -> FastAPI:
    app = FastAPI(title="reentriage", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> dict:
        try:
            return analyze_payload(req)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/bench", response_model=BenchResponse)
    def bench(req: BenchRequest) -> dict:
        try:
            return bench_payload(req)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    return app


app = create_app()
