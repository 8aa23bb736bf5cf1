/**
 * Operator console: subscribe to a run's event stream, chart fitness and
 * diversity per island live, and submit interventions. All engine state flows
 * one way (events in, intervention POSTs out); wiping the view and refolding
 * from seq 1 reproduces it exactly.
 */

import { domainOf, islandColor, linePath, scatterCircles } from "./charts.js";
import {
  InterventionRejected,
  getStatus,
  sendIntervention,
  startRun,
  subscribe,
} from "./client.js";
import { foldEvent, newRunView } from "./fold.js";
import type { Intervention, RunView } from "./types.js";

const W = 560;
const H = 220;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function fitnessChart(view: RunView): string {
  const islands = Object.keys(view.islandSeries).map(Number).sort((a, b) => a - b);
  const xs: number[] = [];
  const ys: number[] = [];
  for (const i of islands) {
    for (const p of view.islandSeries[i] ?? []) {
      xs.push(p.generation);
      if (p.best !== null) ys.push(p.best);
      if (p.mean !== null) ys.push(p.mean);
    }
  }
  const xd = domainOf(xs, 0.01);
  const yd = domainOf(ys);
  let svg = "";
  for (const i of islands) {
    const series = view.islandSeries[i] ?? [];
    const best = series
      .filter((p) => p.best !== null)
      .map((p) => ({ x: p.generation, y: p.best as number }));
    const mean = series
      .filter((p) => p.mean !== null)
      .map((p) => ({ x: p.generation, y: p.mean as number }));
    svg += `<path d="${linePath(best, W, H, xd, yd)}" fill="none" stroke="${islandColor(i)}" stroke-width="2"/>`;
    svg += `<path d="${linePath(mean, W, H, xd, yd)}" fill="none" stroke="${islandColor(i)}" stroke-width="1" stroke-dasharray="4 3" opacity="0.6"/>`;
  }
  const dots = scatterCircles(
    view.scatter.map((p) => ({ x: p.generation, y: p.combined })),
    W,
    H,
    xd,
    yd,
  );
  for (let k = 0; k < dots.length; k++) {
    const point = view.scatter[k];
    const dot = dots[k];
    if (!dot || !point) continue;
    svg += `<circle cx="${dot.cx}" cy="${dot.cy}" r="1.5" fill="${islandColor(point.islandId)}" opacity="0.25"/>`;
  }
  return svg;
}

function diversityChart(view: RunView): string {
  const islands = Object.keys(view.islandSeries).map(Number).sort((a, b) => a - b);
  const xs: number[] = [];
  for (const i of islands) for (const p of view.islandSeries[i] ?? []) xs.push(p.generation);
  const xd = domainOf(xs, 0.01);
  const yd = { min: 0, max: 1 };
  let svg = "";
  for (const i of islands) {
    const pts = (view.islandSeries[i] ?? []).map((p) => ({ x: p.generation, y: p.diversity }));
    svg += `<path d="${linePath(pts, W, H, xd, yd)}" fill="none" stroke="${islandColor(i)}" stroke-width="2"/>`;
  }
  return svg;
}

function render(view: RunView): void {
  el("fitness-chart").innerHTML = fitnessChart(view);
  el("diversity-chart").innerHTML = diversityChart(view);
  el<HTMLElement>("status-line").textContent = view.finished
    ? `finished (${view.finishReason ?? "?"}) — best ${view.bestCombined ?? "n/a"}`
    : `live — ${view.evaluations} evaluations, best ${view.bestCombined ?? "n/a"}`;
  const legend = Object.keys(view.islandSeries)
    .map(Number)
    .sort((a, b) => a - b)
    .map((i) => `<span style="color:${islandColor(i)}">■ island ${i}</span>`)
    .join(" ");
  el("legend").innerHTML = legend;
  el("intervention-history").innerHTML = view.interventions
    .map(
      (iv) =>
        `<li><code>${iv.kind}</code> applies at generation ${iv.appliesAtGeneration}</li>`,
    )
    .join("");
  const form = el<HTMLFieldSetElement>("intervention-form");
  form.disabled = view.finished;
}

function showError(message: string): void {
  const banner = el("error-banner");
  banner.textContent = message;
  banner.style.display = message ? "block" : "none";
}

async function main(): Promise<void> {
  let view = newRunView();
  let currentRun: string | null = null;
  const base = () => el<HTMLInputElement>("base-url").value.replace(/\/$/, "");

  async function attach(runId: string): Promise<void> {
    currentRun = runId;
    view = newRunView();
    render(view);
    showError("");
    el<HTMLInputElement>("run-id").value = runId;
    try {
      await subscribe({
        baseUrl: base(),
        runId,
        fromSeq: 1,
        onEvent: (ev) => {
          foldEvent(view, ev);
          render(view);
        },
        onError: (err) => showError(`stream interrupted, retrying: ${String(err)}`),
      });
      showError("");
    } catch (err) {
      showError(String(err));
    }
  }

  el<HTMLButtonElement>("connect").addEventListener("click", () => {
    const runId = el<HTMLInputElement>("run-id").value.trim();
    if (runId) void attach(runId);
  });

  el<HTMLButtonElement>("start-run").addEventListener("click", async () => {
    try {
      const config = JSON.parse(el<HTMLTextAreaElement>("run-config").value);
      const runId = await startRun(base(), config);
      void attach(runId);
    } catch (err) {
      showError(String(err));
    }
  });

  async function submit(intervention: Intervention): Promise<void> {
    if (!currentRun) {
      showError("no run attached");
      return;
    }
    try {
      const ack = await sendIntervention(base(), currentRun, intervention);
      el("ack-line").textContent = `accepted; applies at generation ${ack.applies_at_generation}`;
      showError("");
    } catch (err) {
      if (err instanceof InterventionRejected && err.status === 409) {
        el<HTMLFieldSetElement>("intervention-form").disabled = true;
      }
      showError(String(err));
    }
  }

  el<HTMLButtonElement>("pause").addEventListener("click", () => void submit({ kind: "pause" }));
  el<HTMLButtonElement>("resume").addEventListener("click", () => void submit({ kind: "resume" }));
  el<HTMLButtonElement>("override").addEventListener("click", () => {
    void submit({
      kind: "param_override",
      path: el<HTMLSelectElement>("override-path").value,
      value: Number(el<HTMLInputElement>("override-value").value),
    });
  });
  el<HTMLButtonElement>("send-guidance").addEventListener("click", () => {
    void submit({ kind: "guidance", text: el<HTMLTextAreaElement>("guidance-text").value });
  });
  el<HTMLButtonElement>("seed-candidate").addEventListener("click", () => {
    try {
      const genome = JSON.parse(el<HTMLTextAreaElement>("seed-genome").value);
      void submit({ kind: "seed_candidate", genome });
    } catch (err) {
      showError(`invalid genome JSON: ${String(err)}`);
    }
  });

  // light status poll so the header reflects pauses even between events
  setInterval(async () => {
    if (!currentRun || view.finished) return;
    try {
      const status = await getStatus(base(), currentRun);
      el("state-line").textContent = `engine state: ${status.state}, generation ${status.generation}`;
    } catch {
      // stream error handling owns the banner
    }
  }, 1000);
}

if (typeof document !== "undefined") {
  void main();
}
