/** Browser entry point: wires the dashboard to a minimal DOM shell. */

import { ApiClient } from "./api.js";
import { Dashboard } from "./dashboard.js";
import { paint } from "./heatmap.js";

const CANVAS_PX = 360;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  parent?: HTMLElement,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  parent?.appendChild(node);
  return node;
}

export async function mount(root: HTMLElement, baseUrl: string): Promise<Dashboard> {
  const api = new ApiClient(baseUrl);
  const dash = new Dashboard(api);

  const controls = el("div", { class: "controls" }, root);
  const stepSlider = el("input", { type: "range", min: "0", value: "0" }, controls);
  const playBtn = el("button", {}, controls);
  playBtn.textContent = "play";
  const rewindBtn = el("button", {}, controls);
  rewindBtn.textContent = "rewind";
  const ffBtn = el("button", {}, controls);
  ffBtn.textContent = "fast-forward";
  const mInput = el("input", { type: "number", min: "1", placeholder: "m" }, controls);
  const panelHost = el("div", { class: "panels" }, root);
  const hover = el("div", { class: "hover" }, root);

  const redraw = () => {
    panelHost.replaceChildren();
    stepSlider.max = String(dash.state.maxStep);
    stepSlider.value = String(dash.state.step);
    for (const panel of dash.panels) {
      const box = el("div", { class: "panel" }, panelHost);
      el("h3", {}, box).textContent =
        `${panel.runId} — spread ${panel.payload.spread_mean.toFixed(2)}`;
      for (const model of [panel.density, panel.diffusion]) {
        const canvas = el("canvas", {
          width: String(CANVAS_PX),
          height: String(CANVAS_PX),
        }, box);
        const ctx = canvas.getContext("2d");
        if (ctx) paint(model, ctx, CANVAS_PX);
        canvas.addEventListener("mousemove", (ev) => {
          const cell = CANVAS_PX / model.m;
          const row = Math.min(model.m - 1, Math.floor(ev.offsetY / cell));
          const col = Math.min(model.m - 1, Math.floor(ev.offsetX / cell));
          hover.textContent = `(${row},${col}): ${model.cellAt(row, col).hover}`;
        });
      }
    }
  };

  stepSlider.addEventListener("change", () => {
    void dash.setStep(Number(stepSlider.value)).then(redraw);
  });
  mInput.addEventListener("change", () => {
    void dash.setM(mInput.value ? Number(mInput.value) : null).then(redraw);
  });
  playBtn.addEventListener("click", () => {
    dash.animator.play();
    let last = performance.now();
    const loop = (now: number) => {
      dash.animator.tick(now - last);
      last = now;
      void dash.refresh().then(redraw);
      if (dash.state.animation.playing) requestAnimationFrame(loop);
    };
    requestAnimationFrame(loop);
  });
  rewindBtn.addEventListener("click", () => {
    dash.animator.rewind();
    void dash.refresh().then(redraw);
  });
  ffBtn.addEventListener("click", () => {
    dash.animator.fastForward();
    void dash.refresh().then(redraw);
  });

  const runs = await api.listRuns();
  for (const run of runs.slice(0, 1)) {
    if (run.status === "done") await dash.addRun(run.run_id);
  }
  redraw();
  return dash;
}
