"""The control and monitoring HTTP API consumed by the dashboard.

Routes:
    POST /api/runs                        start a run, returns {"run_id"}
    GET  /api/runs/{id}                   status summary
    GET  /api/runs/{id}/events?from=SEQ   line-delimited event stream, live-tailed
    GET  /api/runs/{id}/population?island=K   candidates plus reports
    POST /api/runs/{id}/interventions     operator interventions
"""

from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse

from ..pipeline import INTERVENTION_KINDS, OVERRIDE_PATHS
from .runs import LiveRun, RunManager

logger = logging.getLogger(__name__)


def create_app(data_dir: str | Path, dashboard_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="evoisle service")
    manager = RunManager(Path(data_dir))
    app.state.manager = manager
    if dashboard_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=dashboard_dir, html=True), name="dashboard")

    def _run_or_404(run_id: str) -> LiveRun:
        run = manager.get(run_id)
        if run is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        return run

    @app.post("/api/runs")
    async def start_run(request: Request):
        config = await request.json()
        if not isinstance(config, dict):
            raise HTTPException(status_code=400, detail="run config must be an object")
        try:
            run_id = manager.start_run(config)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"run_id": run_id}

    @app.get("/api/runs")
    def list_runs():
        return {"runs": manager.all_runs()}

    @app.get("/api/runs/{run_id}")
    def run_status(run_id: str):
        run = _run_or_404(run_id)
        status = run.engine.status()
        if run.error:
            status["state"] = "error"
            status["error"] = run.error
        return status

    @app.get("/api/runs/{run_id}/events")
    def stream_events(run_id: str, from_seq: int = Query(default=1, alias="from", ge=1)):
        run = _run_or_404(run_id)
        log = run.engine.log

        def generate():
            next_seq = from_seq
            while True:
                batch = log.events_from(next_seq)
                for ev in batch:
                    yield ev.to_json() + "\n"
                if batch:
                    next_seq = batch[-1].seq + 1
                if run.finished and len(log) < next_seq:
                    return
                log.wait_for_more(next_seq - 1, timeout=0.25)

        return StreamingResponse(generate(), media_type="application/x-ndjson")

    @app.get("/api/runs/{run_id}/population")
    def population(run_id: str, island: int | None = Query(default=None)):
        run = _run_or_404(run_id)
        db = run.engine.db
        island_ids = [island] if island is not None else db.island_ids()
        out = []
        for isl in island_ids:
            for cand in db.candidates_on_island(isl):
                rec = db.get(cand.id)
                out.append(
                    {
                        "candidate": rec.candidate.to_dict(),
                        "report": rec.report.to_dict() if rec.report else None,
                    }
                )
        return {"run_id": run_id, "candidates": out}

    @app.post("/api/runs/{run_id}/interventions")
    async def intervene(run_id: str, request: Request):
        run = _run_or_404(run_id)
        body = await request.json()
        if not isinstance(body, dict) or body.get("kind") not in INTERVENTION_KINDS:
            raise HTTPException(
                status_code=400,
                detail=f"intervention kind must be one of {sorted(INTERVENTION_KINDS)}",
            )
        if body["kind"] == "param_override" and body.get("path") not in OVERRIDE_PATHS:
            raise HTTPException(
                status_code=400,
                detail=f"override path must be one of {sorted(OVERRIDE_PATHS)}",
            )
        if run.finished or run.engine.status()["state"] == "finished":
            return JSONResponse(
                status_code=409, content={"detail": "run already finished"}
            )
        try:
            ack = run.engine.submit_intervention(body)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except Exception as exc:
            return JSONResponse(status_code=409, content={"detail": str(exc)})
        return ack

    return app


def serve(port: int, data_dir: str | Path, dashboard_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(
        create_app(data_dir, dashboard_dir),
        host="127.0.0.1",
        port=port,
        log_level="warning",
    )
