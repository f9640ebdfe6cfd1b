/**
 * Sketch pad app: draw a symbol, get live ranked LaTeX candidates from the
 * classification service, adjust the next stroke by what comes back.
 *
 * Classification fires automatically 150 ms after a stroke ends (debounced);
 * input is never blocked while a request is in flight, and only the newest
 * response is rendered.
 */

import { ClassifyClient, StaleResponseError } from "./api";
import { StrokeCapture } from "./capture";
import { validateStrokePayload } from "./schema";
import {
  loadSettings,
  saveSettings,
  Settings,
  validateServiceUrl,
} from "./settings";

export const DEBOUNCE_MS = 150;

export interface App {
  canvas: HTMLCanvasElement;
  capture: StrokeCapture;
  client: ClassifyClient;
  settings: Settings;
  classifyNow: () => Promise<void>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function initApp(root: HTMLElement, storage: Storage = localStorage): App {
  const settings = loadSettings(storage);

  root.append(el("h1", "title", "pqdtw sketch"));
  const banner = el("div", "banner");
  banner.hidden = true;
  root.append(banner);

  const canvas = el("canvas", "pad");
  canvas.width = 400;
  canvas.height = 400;
  root.append(canvas);

  const controls = el("div", "controls");
  const clearButton = el("button", "clear", "Clear");
  const classifyButton = el("button", "classify", "Classify");
  classifyButton.disabled = true;
  controls.append(clearButton, classifyButton);
  root.append(controls);

  const panel = el("div", "settings");
  const kInput = el("input", "k-input");
  kInput.type = "number";
  kInput.min = "1";
  kInput.value = String(settings.k);
  const modeSelect = el("select", "mode-select");
  for (const mode of ["asym", "sym"]) {
    const opt = el("option", undefined, mode);
    opt.value = mode;
    modeSelect.append(opt);
  }
  modeSelect.value = settings.mode;
  const urlInput = el("input", "url-input");
  urlInput.type = "text";
  urlInput.value = settings.serviceUrl;
  const urlError = el("span", "url-error");
  urlError.hidden = true;
  panel.append("top-k ", kInput, " mode ", modeSelect, " service ", urlInput, urlError);
  root.append(panel);

  const results = el("ol", "results");
  root.append(results);

  const ctx = canvas.getContext("2d");
  const capture = new StrokeCapture();
  capture.attach(canvas);
  const client = new ClassifyClient(() => settings.serviceUrl);

  let lastPoint: { x: number; y: number } | null = null;
  canvas.addEventListener("pointerdown", (ev) => {
    const rect = canvas.getBoundingClientRect();
    lastPoint = { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!lastPoint || !ctx) return;
    const rect = canvas.getBoundingClientRect();
    const next = { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
    ctx.beginPath();
    ctx.moveTo(lastPoint.x, lastPoint.y);
    ctx.lineTo(next.x, next.y);
    ctx.stroke();
    lastPoint = next;
  });
  canvas.addEventListener("pointerup", () => {
    lastPoint = null;
  });

  function renderCandidates(candidates: { symbol: string; score: number }[]): void {
    results.replaceChildren(
      ...candidates.map((c) => {
        const item = el("li", "candidate");
        item.append(
          el("code", "symbol", c.symbol),
          el("span", "score", ` ${c.score.toFixed(3)}`),
        );
        return item;
      }),
    );
  }

  function showError(message: string): void {
    banner.textContent = message;
    banner.hidden = false;
  }

  async function classifyNow(): Promise<void> {
    if (capture.isEmpty()) return;
    const payload = capture.payload();
    const problems = validateStrokePayload(payload);
    if (problems.length > 0) {
      showError(problems[0]);
      return;
    }
    try {
      const response = await client.classify(payload, settings.k, settings.mode);
      banner.hidden = true;
      renderCandidates(response.candidates);
    } catch (err) {
      if (err instanceof StaleResponseError) return; // newer sketch state won
      if ((err as Error).name === "AbortError") return;
      showError((err as Error).message); // previous results stay rendered
    }
  }

  let debounceTimer: ReturnType<typeof setTimeout> | undefined;
  capture.onStrokeEnd(() => {
    classifyButton.disabled = capture.isEmpty();
    clearTimeout(debounceTimer);
    debounceTimer = setTimeout(() => void classifyNow(), DEBOUNCE_MS);
  });

  classifyButton.addEventListener("click", () => void classifyNow());
  clearButton.addEventListener("click", () => {
    capture.clear();
    classifyButton.disabled = true;
    results.replaceChildren();
    banner.hidden = true;
    ctx?.clearRect(0, 0, canvas.width, canvas.height);
  });

  kInput.addEventListener("change", () => {
    const k = parseInt(kInput.value, 10);
    if (Number.isInteger(k) && k >= 1) {
      settings.k = k;
      saveSettings(settings, storage);
    }
  });
  modeSelect.addEventListener("change", () => {
    settings.mode = modeSelect.value as Settings["mode"];
    saveSettings(settings, storage);
  });
  urlInput.addEventListener("change", () => {
    const problem = validateServiceUrl(urlInput.value);
    if (problem) {
      urlError.textContent = problem;
      urlError.hidden = false;
      return;
    }
    urlError.hidden = true;
    settings.serviceUrl = urlInput.value;
    saveSettings(settings, storage);
  });

  return { canvas, capture, client, settings, classifyNow };
}
