"""HTTP API over the engine: submit scenarios, poll progress, fetch grids.

Jobs run on a bounded thread pool; completed results live in a bounded
in-memory store with LRU eviction and optional write-through to disk
bundles. Grid payloads are stride-downsampled exact row subsets, never
interpolated, so every served value is a bit-true simulation output.
"""
from __future__ import annotations

import argparse
import os
import threading
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import catalog, engine, scenario_io
from .errors import ScenarioValidationError

DEFAULT_STORE_CAP = 64
DEFAULT_QUEUE_CAP = 32


@dataclass
class JobRecord:
    job_id: str
    state: str = "queued"  # queued -> running -> done | failed
    progress: float = 0.0
    scenario_doc: dict = field(default_factory=dict)
    result: Optional[engine.SimulationResult] = None
    error: Optional[str] = None

    def summary(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "job_id": self.job_id,
            "state": self.state,
            "progress": self.progress,
            "label": self.scenario_doc.get("label", ""),
        }
        if self.error is not None:
            doc["error"] = self.error
        if self.result is not None:
            verdict = self.result.verdict
            report = self.result.a_priori
            doc["summary"] = {
                "diverged": verdict.diverged,
                "reason": verdict.reason.value,
                "first_bad_step": verdict.first_bad_step,
                "peak_magnitude": verdict.peak_magnitude,
                "steps_completed": self.result.steps_completed,
                "final_tip": float(self.result.tip_displacement[-1]),
                "wall_time_seconds": self.result.wall_time,
                "a_priori": None
                if report is None
                else {
                    "criterion": report.criterion_name,
                    "lhs": report.lhs_value,
                    "threshold": report.threshold,
                    "predicted_stable": report.predicted_stable,
                    "advisory": report.advisory,
                },
                "fields": ["w", "phi"] if self.result.history.phi is not None else ["w"],
                "n_space": self.result.scenario.mesh.n_space,
                "n_time": self.result.scenario.mesh.n_time,
            }
        return doc


class JobStore:
    """Thread-safe registry with LRU eviction of finished jobs."""

    def __init__(self, cap: int):
        self.cap = cap
        self._jobs: OrderedDict[str, JobRecord] = OrderedDict()
        self._lock = threading.Lock()

    def add(self, record: JobRecord) -> None:
        with self._lock:
            self._jobs[record.job_id] = record
            finished = [j for j, r in self._jobs.items() if r.state in ("done", "failed")]
            while len(self._jobs) > self.cap and finished:
                self._jobs.pop(finished.pop(0), None)

    def get(self, job_id: str) -> Optional[JobRecord]:
        with self._lock:
            record = self._jobs.get(job_id)
            if record is not None:
                self._jobs.move_to_end(job_id)
            return record

    def count_pending(self) -> int:
        with self._lock:
            return sum(1 for r in self._jobs.values() if r.state in ("queued", "running"))


def create_app(
    *,
    max_workers: Optional[int] = None,
    queue_cap: int = DEFAULT_QUEUE_CAP,
    store_cap: int = DEFAULT_STORE_CAP,
    results_dir: Optional[str] = None,
    static_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="flexsim", version="0.1.0")
    store = JobStore(store_cap)
    pool = ThreadPoolExecutor(max_workers=max_workers or os.cpu_count() or 2)
    app.state.job_store = store
    app.state.pool = pool

    def execute(record: JobRecord, scenario: engine.Scenario) -> None:
        record.state = "running"

        def on_progress(step: int, total: int) -> None:
            record.progress = step / total

        try:
            result = engine.run(scenario, progress=on_progress)
            record.result = result
            if results_dir is not None:
                scenario_io.export_result(
                    result, Path(results_dir) / record.job_id, {"bin"}
                )
            record.progress = 1.0
            record.state = "done"
        except Exception as exc:  # noqa: BLE001  (validation, memory cap, bugs)
            record.error = f"{type(exc).__name__}: {exc}"
            record.state = "failed"

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/models")
    def models() -> dict:
        return catalog.model_catalog()

    @app.post("/api/jobs", status_code=202)
    def submit(doc: dict) -> JSONResponse:
        try:
            scenario = scenario_io.scenario_from_dict(doc)
        except ScenarioValidationError as exc:
            return JSONResponse(
                status_code=400,
                content={
                    "errors": [{"path": path, "message": msg} for path, msg in exc.issues]
                },
            )
        if store.count_pending() >= queue_cap:
            return JSONResponse(
                status_code=503,
                content={"error": "job queue full", "retry_after_seconds": 1},
                headers={"Retry-After": "1"},
            )
        record = JobRecord(job_id=uuid.uuid4().hex[:12], scenario_doc=doc)
        store.add(record)
        pool.submit(execute, record, scenario)
        return JSONResponse(status_code=202, content={"job_id": record.job_id})

    def _get_record(job_id: str) -> JobRecord:
        record = store.get(job_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return record

    def _get_done(job_id: str) -> JobRecord:
        record = _get_record(job_id)
        if record.state == "failed":
            raise HTTPException(status_code=409, detail=f"job failed: {record.error}")
        if record.state != "done":
            raise HTTPException(status_code=409, detail=f"job is {record.state}, not done")
        return record

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str) -> dict:
        return _get_record(job_id).summary()

    @app.get("/api/jobs/{job_id}/fields/{name}")
    def field_data(job_id: str, name: str, stride: int = Query(default=1, ge=1)) -> dict:
        record = _get_done(job_id)
        result = record.result
        history = result.history
        grid = {"w": history.w, "phi": history.phi}.get(name)
        if grid is None:
            raise HTTPException(status_code=404, detail=f"unknown field {name!r}")
        rows = grid[::stride]
        times = result.tip_times[::stride]
        mesh = engine.build_mesh(result.scenario.mesh)
        return {
            "field": name,
            "stride": stride,
            "x": mesh.node_positions().tolist(),
            "t": times.tolist(),
            "values": rows.tolist(),
            "steps_completed": result.steps_completed,
        }

    @app.get("/api/jobs/{job_id}/tip")
    def tip_data(job_id: str) -> dict:
        record = _get_done(job_id)
        result = record.result
        payload = {
            "t": result.tip_times.tolist(),
            "w": result.tip_displacement.tolist(),
        }
        if result.tip_rotation is not None:
            payload["phi"] = result.tip_rotation.tolist()
        return payload

    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = str(bundled) if bundled.is_dir() else None
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="flexsim-service")
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("PLATFORM_PORT", "8000")),
        help="listen port (PLATFORM_PORT env overrides the default)",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--workers", type=int, default=None, help="job pool size")
    parser.add_argument("--results-dir", default=None, help="write-through bundle directory")
    parser.add_argument("--static-dir", default=None, help="UI bundle directory")
    args = parser.parse_args(argv)

    import uvicorn

    app = create_app(
        max_workers=args.workers,
        results_dir=args.results_dir,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
