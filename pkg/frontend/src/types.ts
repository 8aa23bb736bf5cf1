/** Event documents streamed by the service and the folded client-side view. */

export type EventType =
  | "run_started"
  | "candidate_generated"
  | "candidate_evaluated"
  | "generation_completed"
  | "migration"
  | "intervention_applied"
  | "task_failed"
  | "run_finished";

export interface EngineEvent {
  seq: number;
  ts_ms: number;
  run_id: string;
  type: EventType;
  payload: Record<string, unknown>;
}

export interface SeriesPoint {
  generation: number;
  best: number | null;
  mean: number | null;
  diversity: number;
}

export interface ScatterPoint {
  generation: number;
  combined: number;
  islandId: number;
}

export interface InterventionRecord {
  interventionId: string;
  kind: string;
  appliesAtGeneration: number;
  detail: Record<string, unknown>;
}

/**
 * Client-side state derived purely from the event stream. Two subscriptions
 * that saw the same events must fold to deeply equal views.
 */
export interface RunView {
  runId: string | null;
  lastSeq: number;
  finished: boolean;
  finishReason: string | null;
  workload: string | null;
  seed: number | null;
  islandSeries: Record<number, SeriesPoint[]>;
  scatter: ScatterPoint[];
  interventions: InterventionRecord[];
  migrations: number;
  taskFailures: number;
  evaluations: number;
  bestCombined: number | null;
}

export interface Intervention {
  kind: "pause" | "resume" | "param_override" | "guidance" | "seed_candidate";
  path?: string;
  value?: number;
  text?: string;
  genome?: Record<string, unknown>;
  island?: number;
}

export interface InterventionAck {
  accepted: boolean;
  applies_at_generation: number;
  id: string;
}

export interface RunStatus {
  state: "running" | "paused" | "finished" | "error";
  generation: number;
  best_combined: number | null;
  islands: { id: number; generation: number; diversity: number; members: number }[];
  error?: string;
}
