"""HTTP front end for the detection engine.

Read endpoints (detect, segments, config, health) run concurrently;
ingest and train are exclusive writers guarded by one non-blocking lock,
so a second mutation while one runs answers 409. Train runs as a
background job polled through /jobs/{id}. Every error body has the shape
{"error": string}.
"""

from __future__ import annotations

import itertools
import os
import socket
import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from .config import config_to_dict
from .corpus import Segment, count_tokens
from .errors import (
    BindFailure,
    CorruptFile,
    EmptyIndex,
    EngineNotReady,
    InsufficientVectors,
    IoFailure,
    RemoteUnavailable,
    SimscanError,
)


class DetectRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    text: str
    k: int | None = None
    nprobe: int | None = None


class SegmentBody(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: int
    doc_id: str
    text: str


class IngestRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    corpus: list[SegmentBody]


class TrainRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dataset: str


def _error(status, message):
    return JSONResponse(status_code=status, content={"error": message})


def create_app(engine, ui_dir=None):
    """Wire the endpoints around one engine instance."""
    app = FastAPI()
    writer = threading.Lock()
    jobs = {}
    job_ids = itertools.count(1)

    @app.exception_handler(RequestValidationError)
    async def on_validation(request: Request, exc: RequestValidationError):
        return _error(400, f"invalid request: {exc.errors()[0].get('msg', exc)}")

    @app.exception_handler(SimscanError)
    async def on_engine_error(request: Request, exc: SimscanError):
        if isinstance(exc, (EmptyIndex, EngineNotReady)):
            return _error(409, str(exc))
        if isinstance(exc, (CorruptFile, IoFailure, InsufficientVectors)):
            return _error(400, str(exc))
        if isinstance(exc, RemoteUnavailable):
            return _error(502, str(exc))
        return _error(500, str(exc))

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/config")
    def get_config():
        return config_to_dict(engine.config)

    @app.get("/segments/{segment_id}")
    def get_segment(segment_id: int):
        seg = engine.segments.get(segment_id)
        if seg is None:
            return _error(404, f"no segment with id {segment_id}")
        return {
            "id": seg.id,
            "doc_id": seg.doc_id,
            "text": seg.text,
            "token_count": seg.token_count,
        }

    @app.post("/ingest")
    def ingest(body: IngestRequest):
        if not writer.acquire(blocking=False):
            return _error(409, "another ingest or train job is running")
        try:
            segments = [
                Segment(
                    id=s.id,
                    doc_id=s.doc_id,
                    text=s.text,
                    token_count=count_tokens(s.text),
                )
                for s in body.corpus
            ]
            for s in segments:
                if not s.text.strip():
                    return _error(400, f"segment {s.id} has empty text")
            count = engine.ingest(segments)
            return {"count": count}
        finally:
            writer.release()

    @app.post("/detect")
    def detect(body: DetectRequest):
        if not body.text.strip():
            return _error(400, "query text is empty")
        report = engine.detect(body.text, k=body.k, n_probe=body.nprobe)
        return report.to_dict()

    @app.post("/train")
    def train(body: TrainRequest):
        if not os.path.exists(body.dataset):
            return _error(400, f"dataset file not found: {body.dataset}")
        if not writer.acquire(blocking=False):
            return _error(409, "another ingest or train job is running")
        job_id = f"job-{next(job_ids)}"
        jobs[job_id] = {"id": job_id, "kind": "train", "status": "running"}

        def run():
            try:
                history = engine.train_from_file(body.dataset)
                jobs[job_id] = {
                    "id": job_id,
                    "kind": "train",
                    "status": "done",
                    "epochs": len(history),
                    "final_accuracy": history[-1]["accuracy"] if history else None,
                }
            except Exception as exc:
                jobs[job_id] = {
                    "id": job_id,
                    "kind": "train",
                    "status": "failed",
                    "error": str(exc),
                }
            finally:
                writer.release()

        threading.Thread(target=run, daemon=True).start()
        return {"job_id": job_id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            return _error(404, f"no job with id {job_id}")
        return job

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def parse_bind(bind):
    """Split a host:port string, tolerating a bare port."""
    if ":" in bind:
        host, _, port = bind.rpartition(":")
    else:
        host, port = "127.0.0.1", bind
    try:
        return host or "127.0.0.1", int(port)
    except ValueError as exc:
        raise BindFailure(f"invalid bind address {bind!r}") from exc


def serve(engine, bind="127.0.0.1:8000", ui_dir=None):
    """Run the service until interrupted. Raises BindFailure when the
    address is unavailable."""
    import uvicorn

    host, port = parse_bind(bind)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()
    app = create_app(engine, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
