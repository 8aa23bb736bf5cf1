/**
 * Streaming event client: reads the service's line-delimited event stream,
 * resumes from the last received sequence number after a disconnect (no gaps,
 * no duplicates in the folded view), and retries with exponential backoff.
 */

import type { EngineEvent, Intervention, InterventionAck, RunStatus } from "./types.js";

export interface SubscribeOptions {
  baseUrl: string;
  runId: string;
  fromSeq?: number;
  onEvent: (ev: EngineEvent) => void;
  onError?: (err: unknown) => void;
  signal?: AbortSignal;
  /** retries after network failures; the cursor still advances on progress */
  maxRetries?: number;
  backoffMs?: number;
}

export class RunNotFoundError extends Error {}

async function* readLines(body: ReadableStream<Uint8Array>): AsyncGenerator<string> {
  const reader = body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  try {
    while (true) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, nl).trim();
        buffer = buffer.slice(nl + 1);
        if (line) yield line;
      }
    }
    const tail = buffer.trim();
    if (tail) yield tail;
  } finally {
    reader.releaseLock();
  }
}

/**
 * Stream events into onEvent until the run finishes (run_finished observed).
 * Resolves with the seq of the last event delivered.
 */
export async function subscribe(opts: SubscribeOptions): Promise<number> {
  const backoff = opts.backoffMs ?? 250;
  const maxRetries = opts.maxRetries ?? 10;
  let nextSeq = opts.fromSeq ?? 1;
  let finished = false;
  let failures = 0;

  while (!finished) {
    try {
      const resp = await fetch(
        `${opts.baseUrl}/api/runs/${opts.runId}/events?from=${nextSeq}`,
        { signal: opts.signal },
      );
      if (resp.status === 404) {
        throw new RunNotFoundError(`unknown run ${opts.runId}`);
      }
      if (!resp.ok || !resp.body) {
        throw new Error(`event stream returned ${resp.status}`);
      }
      for await (const line of readLines(resp.body)) {
        const ev = JSON.parse(line) as EngineEvent;
        opts.onEvent(ev);
        nextSeq = ev.seq + 1;
        failures = 0;
        if (ev.type === "run_finished") {
          finished = true;
        }
      }
      if (!finished) {
        // stream closed early (disconnect); resume from the cursor
        failures += 1;
        if (failures > maxRetries) throw new Error("stream kept closing before run_finished");
        await sleep(backoff * Math.min(2 ** failures, 32));
      }
    } catch (err) {
      if (err instanceof RunNotFoundError || opts.signal?.aborted) {
        throw err;
      }
      opts.onError?.(err);
      failures += 1;
      if (failures > maxRetries) throw err;
      await sleep(backoff * Math.min(2 ** failures, 32));
    }
  }
  return nextSeq - 1;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function startRun(
  baseUrl: string,
  config: Record<string, unknown>,
): Promise<string> {
  const resp = await fetch(`${baseUrl}/api/runs`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(config),
  });
  if (!resp.ok) throw new Error(`run start failed: ${resp.status} ${await resp.text()}`);
  const body = (await resp.json()) as { run_id: string };
  return body.run_id;
}

export async function getStatus(baseUrl: string, runId: string): Promise<RunStatus> {
  const resp = await fetch(`${baseUrl}/api/runs/${runId}`);
  if (resp.status === 404) throw new RunNotFoundError(runId);
  return (await resp.json()) as RunStatus;
}

export class InterventionRejected extends Error {
  constructor(public status: number, public detail: string) {
    super(`intervention rejected (${status}): ${detail}`);
  }
}

export async function sendIntervention(
  baseUrl: string,
  runId: string,
  intervention: Intervention,
): Promise<InterventionAck> {
  const resp = await fetch(`${baseUrl}/api/runs/${runId}/interventions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(intervention),
  });
  if (!resp.ok) {
    let detail = await resp.text();
    try {
      detail = (JSON.parse(detail) as { detail: string }).detail;
    } catch {
      // raw text is fine
    }
    throw new InterventionRejected(resp.status, detail);
  }
  return (await resp.json()) as InterventionAck;
}
