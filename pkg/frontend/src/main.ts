/** DOM wiring for the file-based viewer: load an export, toggle labels,
 * sweep the NN threshold, drag-select a window on the tracks. */

import { renderConfidenceBars, renderTracks, DEFAULT_LAYOUT } from "./render.js";
import { ViewerState } from "./state.js";
import type { Export } from "./types.js";

let state: ViewerState | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function redraw(): void {
  if (state === null) {
    return;
  }
  const models = state.models();
  if (!state.nnAvailable) {
    delete models["nn"];
  }
  el<HTMLDivElement>("tracks").innerHTML = renderTracks(state.export, models);
  el<HTMLDivElement>("confidence").innerHTML = renderConfidenceBars(state.confidenceBars());
  el<HTMLSpanElement>("notice").textContent = state.notice;
  const sel = state.selection;
  el<HTMLSpanElement>("selection").textContent = sel
    ? `selection: ${sel.t0}-${sel.t1} ms`
    : "selection: full timeline";
}

function buildLabelToggles(): void {
  if (state === null) {
    return;
  }
  const box = el<HTMLDivElement>("labels");
  box.innerHTML = "";
  for (const label of state.labels) {
    const id = `label-${label}`;
    const wrap = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    input.id = id;
    input.checked = !state.excludedLabels.has(label);
    input.addEventListener("change", () => {
      state?.toggleLabel(label);
      redraw();
    });
    wrap.appendChild(input);
    wrap.appendChild(document.createTextNode(` ${label}`));
    box.appendChild(wrap);
  }
}

function setupThreshold(): void {
  if (state === null) {
    return;
  }
  const slider = el<HTMLInputElement>("threshold");
  slider.min = "0";
  slider.max = String(state.export.raw_horizon_m);
  slider.step = "0.005";
  slider.value = String(state.thresholdM);
  slider.disabled = !state.nnAvailable;
  el<HTMLSpanElement>("threshold-value").textContent = `${state.thresholdM} m`;
  slider.oninput = () => {
    state?.setThreshold(Number(slider.value));
    el<HTMLSpanElement>("threshold-value").textContent = `${state?.thresholdM} m`;
    redraw();
  };
}

function trackTime(event: MouseEvent): number | null {
  if (state === null) {
    return null;
  }
  const svg = el<HTMLDivElement>("tracks").querySelector("svg");
  if (svg === null) {
    return null;
  }
  const rect = svg.getBoundingClientRect();
  const { width, margin } = DEFAULT_LAYOUT;
  const plotW = width - 2 * margin;
  const px = ((event.clientX - rect.left) / rect.width) * width;
  const frac = Math.min(1, Math.max(0, (px - margin) / plotW));
  return state.export.timeline.t_start_ms + frac * state.export.timeline.duration_ms;
}

function setupSelection(): void {
  const tracks = el<HTMLDivElement>("tracks");
  let dragStart: number | null = null;
  tracks.addEventListener("mousedown", (event) => {
    dragStart = trackTime(event);
  });
  tracks.addEventListener("mouseup", (event) => {
    const end = trackTime(event);
    if (state !== null && dragStart !== null && end !== null) {
      state.select(Math.round(dragStart), Math.round(end));
      redraw();
    }
    dragStart = null;
  });
  el<HTMLButtonElement>("clear-selection").addEventListener("click", () => {
    state?.clearSelection();
    redraw();
  });
  const snap = el<HTMLInputElement>("snap");
  snap.addEventListener("change", () => {
    if (state !== null) {
      state.snapToSegments = snap.checked;
    }
  });
}

function setupFileInput(): void {
  const input = el<HTMLInputElement>("file");
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (file === undefined) {
      return;
    }
    try {
      const exp = JSON.parse(await file.text()) as Export;
      state = new ViewerState(exp);
      el<HTMLSpanElement>("status").textContent =
        `${file.name}: ${exp.samples.length} samples, ${exp.aois.length} AOIs`;
      buildLabelToggles();
      setupThreshold();
      redraw();
    } catch (err) {
      el<HTMLSpanElement>("status").textContent = String(err);
    }
  });
}

export function init(): void {
  setupFileInput();
  setupSelection();
}

if (typeof document !== "undefined" && document.getElementById("file") !== null) {
  init();
}
