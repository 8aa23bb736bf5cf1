"""Command-line entry points.

    evoisle solve <packing|points|hermite> [--seed N] [--out PATH]
    evoisle run --workload W --islands I --generations G [--sampler S] ...
    evoisle serve --port P --data-dir D
    evoisle replay <eventlog> [--snapshot PATH]
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
import uuid
from pathlib import Path

import numpy as np

from ..events import CorruptLogError, EventLog
from ..workloads import (
    PackingHyperparams,
    calculate_ratio,
    construct_packing,
    de_search,
    multi_start_ratio_solve,
    validate_packing,
)
from . import persistence
from .runs import engine_from_config

logger = logging.getLogger(__name__)


def _write_document(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n", encoding="utf-8")
    print(text)


def _solve(args) -> int:
    started = time.time()
    if args.problem == "packing":
        centers, radii, total = construct_packing(PackingHyperparams(seed=args.seed))
        valid, violations = validate_packing(centers, radii, tol=1e-9)
        doc = {
            "problem": "packing",
            "seed": args.seed,
            "solution": {"centers": centers.tolist(), "radii": radii.tolist()},
            "score": total,
            "valid": valid,
            "elapsed_seconds": time.time() - started,
        }
        if violations:
            doc["violations"] = violations
    elif args.problem == "points":
        points, ratio_sq = multi_start_ratio_solve(seed=args.seed)
        min_dist = float(np.min(np.linalg.norm(
            points[:, None, :] - points[None, :, :], axis=-1
        )[np.triu_indices(len(points), k=1)]))
        doc = {
            "problem": "points",
            "seed": args.seed,
            "solution": {"points": points.tolist()},
            "score": ratio_sq,
            "valid": abs(min_dist - 1.0) <= 1e-9 and calculate_ratio(points) ** 2 == ratio_sq,
            "elapsed_seconds": time.time() - started,
        }
    else:
        coeffs, objective = de_search(seed=args.seed)
        doc = {
            "problem": "hermite",
            "seed": args.seed,
            "solution": {"c0": coeffs.c0, "c1": coeffs.c1, "c2": coeffs.c2, "c3": coeffs.c3},
            "score": objective,
            "valid": 0.0 <= objective < 1e6,
            "elapsed_seconds": time.time() - started,
        }
    _write_document(doc, args.out)
    return 0


def _run(args) -> int:
    config: dict = {}
    if args.config:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    config.setdefault("workload", args.workload)
    config.setdefault("islands", args.islands)
    config.setdefault("generations", args.generations)
    config.setdefault("seed", args.seed)
    if args.sampler:
        sampler_cfg = config.setdefault("sampler", {})
        if isinstance(sampler_cfg, dict):
            sampler_cfg["strategy"] = args.sampler
        else:
            config["sampler"] = args.sampler

    run_id = config.get("run_id") or uuid.uuid4().hex
    out_dir = Path(args.out_dir) if args.out_dir else (
        persistence.data_dir_from(None) / "runs" / run_id
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    event_log = EventLog(run_id)
    writer = persistence.EventFileWriter(out_dir / "events.jsonl")
    event_log.add_sink(writer)
    sink = lambda snap: persistence.write_snapshot(out_dir / "snapshot.json", snap)
    try:
        engine, stop = engine_from_config(config, run_id, event_log, snapshot_sink=sink)
    except (ValueError, KeyError) as exc:
        print(f"invalid run config: {exc}", file=sys.stderr)
        return 2
    result = engine.run(stop)
    writer.close()
    best = result.best
    print(
        json.dumps(
            {
                "run_id": run_id,
                "out_dir": str(out_dir),
                "generations": result.stats["generations_completed"],
                "evaluations": result.stats["evaluations"],
                "best_combined": result.stats["best_combined"],
                "best_id": best[0].id if best else None,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def _serve(args) -> int:
    from .http import serve

    data_dir = persistence.data_dir_from(args.data_dir)
    try:
        serve(args.port, data_dir, args.dashboard)
    except OSError as exc:
        print(f"cannot serve on port {args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def _replay(args) -> int:
    try:
        events = persistence.read_events(args.eventlog)
        state = persistence.replay(events)
    except (CorruptLogError, OSError) as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return 1
    snapshot_path = (
        Path(args.snapshot)
        if args.snapshot
        else Path(args.eventlog).parent / "snapshot.json"
    )
    if snapshot_path.exists():
        stored = persistence.read_snapshot(snapshot_path)
        if persistence.snapshot_bytes(state) != persistence.snapshot_bytes(stored):
            print("replayed state DOES NOT match stored snapshot", file=sys.stderr)
            return 1
        print(f"replay OK: state matches {snapshot_path}")
    else:
        print("replay OK (no snapshot to compare)")
    best = state.get("best")
    if best:
        print(f"best candidate {best['id']} combined={best['combined']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evoisle")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a standalone math solver")
    p_solve.add_argument("problem", choices=["packing", "points", "hermite"])
    p_solve.add_argument("--seed", type=int, default=42)
    p_solve.add_argument("--out", default=None, help="write the solver document here")
    p_solve.set_defaults(func=_solve)

    p_run = sub.add_parser("run", help="execute a full evolution run")
    p_run.add_argument("--workload", default="sphere")
    p_run.add_argument("--islands", type=int, default=4)
    p_run.add_argument("--generations", type=int, default=100)
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument("--config", default=None, help="JSON run config file")
    p_run.add_argument("--sampler", choices=["adaptive", "random", "top_k"], default=None)
    p_run.add_argument("--out-dir", default=None)
    p_run.set_defaults(func=_run)

    p_serve = sub.add_parser("serve", help="start the HTTP control/monitoring service")
    p_serve.add_argument("--port", type=int, default=8321)
    p_serve.add_argument("--data-dir", default=None)
    p_serve.add_argument("--dashboard", default=None,
                         help="serve a built dashboard directory at /ui")
    p_serve.set_defaults(func=_serve)

    p_replay = sub.add_parser("replay", help="re-derive state from an event log")
    p_replay.add_argument("eventlog")
    p_replay.add_argument("--snapshot", default=None)
    p_replay.set_defaults(func=_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
