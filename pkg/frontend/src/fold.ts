/**
 * Pure event folding: the RunView is a function of the event sequence alone.
 * Duplicates (seq <= lastSeq) are ignored so overlapping resumes are safe;
 * a sequence gap throws, signalling the client to re-subscribe.
 */

import type { EngineEvent, RunView, ScatterPoint } from "./types.js";

export class EventGapError extends Error {
  constructor(public expected: number, public got: number) {
    super(`event gap: expected seq ${expected}, got ${got}`);
  }
}

export function newRunView(): RunView {
  return {
    runId: null,
    lastSeq: 0,
    finished: false,
    finishReason: null,
    workload: null,
    seed: null,
    islandSeries: {},
    scatter: [],
    interventions: [],
    migrations: 0,
    taskFailures: 0,
    evaluations: 0,
    bestCombined: null,
    // candidate id -> generation, needed to place evaluations on the x axis
  };
}

const generationOf = new WeakMap<RunView, Map<string, { generation: number; islandId: number }>>();

function candidateIndex(view: RunView): Map<string, { generation: number; islandId: number }> {
  let idx = generationOf.get(view);
  if (!idx) {
    idx = new Map();
    generationOf.set(view, idx);
  }
  return idx;
}

/** Fold one event into the view; returns true if it was applied. */
export function foldEvent(view: RunView, ev: EngineEvent): boolean {
  if (ev.seq <= view.lastSeq) {
    return false; // duplicate from an overlapping resume
  }
  if (ev.seq !== view.lastSeq + 1) {
    throw new EventGapError(view.lastSeq + 1, ev.seq);
  }
  view.lastSeq = ev.seq;
  view.runId = ev.run_id;
  const p = ev.payload as Record<string, any>;

  switch (ev.type) {
    case "run_started": {
      view.workload = p.workload ?? null;
      view.seed = p.seed ?? null;
      break;
    }
    case "candidate_generated": {
      const cand = p.candidate;
      candidateIndex(view).set(cand.id, {
        generation: cand.generation,
        islandId: cand.island_id,
      });
      break;
    }
    case "candidate_evaluated": {
      view.evaluations += 1;
      const meta = candidateIndex(view).get(p.id);
      const report = p.report;
      if (report?.correct) {
        const combined = report.combined as number;
        if (view.bestCombined === null || combined > view.bestCombined) {
          view.bestCombined = combined;
        }
        if (meta) {
          view.scatter.push({
            generation: meta.generation,
            combined,
            islandId: meta.islandId,
          } satisfies ScatterPoint);
        }
      }
      break;
    }
    case "generation_completed": {
      const islandId = p.island_id as number;
      const series = (view.islandSeries[islandId] ??= []);
      series.push({
        generation: p.generation,
        best: p.best_combined ?? null,
        mean: p.mean_combined ?? null,
        diversity: p.diversity,
      });
      break;
    }
    case "migration": {
      view.migrations += 1;
      break;
    }
    case "intervention_applied": {
      view.interventions.push({
        interventionId: p.intervention_id,
        kind: p.kind,
        appliesAtGeneration: p.applies_at_generation,
        detail: p,
      });
      break;
    }
    case "task_failed": {
      view.taskFailures += 1;
      break;
    }
    case "run_finished": {
      view.finished = true;
      view.finishReason = p.reason ?? null;
      break;
    }
  }
  return true;
}

export function foldAll(view: RunView, events: Iterable<EngineEvent>): RunView {
  for (const ev of events) {
    foldEvent(view, ev);
  }
  return view;
}

/** The comparable projection: everything except the internal candidate index. */
export function viewSnapshot(view: RunView): RunView {
  return JSON.parse(JSON.stringify(view)) as RunView;
}
