/**
 * DOM wiring. Reads controls, forwards clicks and keystrokes to the
 * controller, and repaints panels from the view after every response.
 */

import { ApiClient } from "./api.js";
import { SessionController } from "./state.js";
import {
  renderBanner,
  renderCertificates,
  renderEndScreen,
  renderFeedback,
  renderHistory,
  renderInterval,
  renderPhase,
  renderPreview,
} from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const serviceUrl = el<HTMLInputElement>("service-url");
const orderInput = el<HTMLInputElement>("order");
const strategyInput = el<HTMLInputElement>("strategy");
const horizonInput = el<HTMLInputElement>("horizon");
const startButton = el<HTMLButtonElement>("start");
const pointInput = el<HTMLInputElement>("point");
const previewButton = el<HTMLButtonElement>("preview-btn");
const moveButton = el<HTMLButtonElement>("move-btn");

const panels = {
  banner: el<HTMLDivElement>("banner"),
  interval: el<HTMLDivElement>("interval"),
  phase: el<HTMLDivElement>("phase"),
  preview: el<HTMLDivElement>("preview-panel"),
  feedback: el<HTMLDivElement>("feedback"),
  certificates: el<HTMLDivElement>("certificates"),
  history: el<HTMLDivElement>("history"),
  end: el<HTMLDivElement>("endscreen"),
};

let controller = makeController();

function makeController(): SessionController {
  return new SessionController(new ApiClient(serviceUrl.value.replace(/\/$/, "")));
}

function repaint(): void {
  const view = controller.view();
  panels.banner.innerHTML = renderBanner(view.banner);
  panels.interval.innerHTML = renderInterval(view.state);
  panels.phase.innerHTML = view.state ? renderPhase(view.state.phase) : "";
  panels.preview.innerHTML = renderPreview(view.preview);
  panels.feedback.innerHTML = renderFeedback(view.feedback);
  panels.certificates.innerHTML = renderCertificates(view.certificates);
  panels.history.innerHTML = renderHistory(view.history);
  panels.end.innerHTML = renderEndScreen(view);
  const live = view.sessionId !== null && !view.finished;
  pointInput.disabled = !live;
  previewButton.disabled = !live;
  moveButton.disabled = !live;
}

async function start(): Promise<void> {
  controller = makeController();
  await controller.startSession({
    order: orderInput.value,
    strategy: strategyInput.value,
    horizon: Number(horizonInput.value),
  });
  repaint();
}

startButton.addEventListener("click", () => void start());

moveButton.addEventListener("click", async () => {
  moveButton.disabled = true;
  const result = await controller.submitMove(pointInput.value);
  if (result?.legal) pointInput.value = "";
  repaint();
});

previewButton.addEventListener("click", async () => {
  await controller.previewMove(pointInput.value);
  repaint();
});

let previewTimer: ReturnType<typeof setTimeout> | undefined;
pointInput.addEventListener("input", () => {
  clearTimeout(previewTimer);
  const text = pointInput.value.trim();
  if (!text) return;
  previewTimer = setTimeout(() => {
    void controller.previewMove(text).then((applied) => {
      if (applied) repaint();
    });
  }, 250);
});

pointInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") moveButton.click();
});

document.body.addEventListener("click", async (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset["action"];
  if (action === "retry") {
    await controller.retry();
    repaint();
  } else if (action === "download") {
    const { filename, text } = await controller.downloadTranscript();
    const blob = new Blob([text], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const link = document.createElement("a");
    link.href = url;
    link.download = filename;
    link.click();
    URL.revokeObjectURL(url);
  }
});

repaint();
