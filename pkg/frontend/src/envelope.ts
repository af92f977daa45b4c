import { linearScale, ticks } from "./scales.js";
import { formatFdp } from "./format.js";
import type { EnvelopeResponse } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 240;
const MARGIN = { top: 10, right: 46, bottom: 30, left: 46 };

export type EnvelopeCallbacks = {
  onUseLevelSet(ids: string[], k: number): void;
};

/** Dual curve panel: the true-positive lower bound and the false discovery
 *  proportion upper bound over the nested level sets, with a k slider.
 *  Curves are the server arrays point for point. */
export class EnvelopeView {
  private readonly chart: HTMLDivElement;
  private readonly slider: HTMLInputElement;
  private readonly readout: HTMLSpanElement;
  private readonly useButton: HTMLButtonElement;
  private data: EnvelopeResponse | null = null;

  constructor(container: HTMLElement, callbacks: EnvelopeCallbacks) {
    container.replaceChildren();
    this.chart = document.createElement("div");
    this.chart.className = "envelope-chart";
    container.appendChild(this.chart);

    const controls = document.createElement("div");
    controls.className = "envelope-controls";
    this.slider = document.createElement("input");
    this.slider.type = "range";
    this.slider.min = "0";
    this.slider.value = "0";
    this.slider.id = "envelope-k";
    this.readout = document.createElement("span");
    this.readout.className = "envelope-readout";
    this.useButton = document.createElement("button");
    this.useButton.type = "button";
    this.useButton.textContent = "use this set";
    this.useButton.disabled = true;
    controls.append(this.slider, this.readout, this.useButton);
    container.appendChild(controls);

    this.slider.addEventListener("input", () => this.updateReadout());
    this.useButton.addEventListener("click", () => {
      if (!this.data) {
        return;
      }
      const k = Number(this.slider.value);
      callbacks.onUseLevelSet(this.data.order_ids.slice(0, k), k);
    });
  }

  setData(data: EnvelopeResponse): void {
    this.data = data;
    this.slider.max = String(data.k.length);
    if (Number(this.slider.value) > data.k.length) {
      this.slider.value = String(data.k.length);
    }
    this.useButton.disabled = false;
    this.draw();
    this.updateReadout();
  }

  /** Server values at the slider position; k=0 is the empty selection. */
  private updateReadout(): void {
    const k = Number(this.slider.value);
    if (!this.data || k === 0) {
      this.readout.textContent = "k=0 · TP ≥ 0";
      return;
    }
    const tp = this.data.tp_lower[k - 1];
    const fdp = this.data.fdp_upper[k - 1];
    this.readout.textContent = `k=${k} · TP ≥ ${tp} · FDP ≤ ${formatFdp(fdp)}`;
  }

  private draw(): void {
    if (!this.data) {
      return;
    }
    const m = this.data.k.length;
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("width", String(WIDTH));
    svg.setAttribute("height", String(HEIGHT));
    svg.setAttribute("class", "envelope-svg");

    const x = linearScale([1, Math.max(m, 2)], [MARGIN.left, WIDTH - MARGIN.right]);
    const tpMax = Math.max(1, ...this.data.tp_lower);
    const yTp = linearScale([0, tpMax], [HEIGHT - MARGIN.bottom, MARGIN.top]);
    const yFdp = linearScale([0, 1], [HEIGHT - MARGIN.bottom, MARGIN.top]);

    const toPath = (values: number[], scale: (v: number) => number): string =>
      values.map((v, i) => `${x.apply(i + 1).toFixed(2)},${scale(v).toFixed(2)}`).join(" ");

    const tpLine = document.createElementNS(SVG_NS, "polyline");
    tpLine.setAttribute("points", toPath(this.data.tp_lower, yTp.apply));
    tpLine.setAttribute("class", "curve-tp");
    const fdpLine = document.createElementNS(SVG_NS, "polyline");
    fdpLine.setAttribute("points", toPath(this.data.fdp_upper, yFdp.apply));
    fdpLine.setAttribute("class", "curve-fdp");

    const base = document.createElementNS(SVG_NS, "line");
    base.setAttribute("x1", String(MARGIN.left));
    base.setAttribute("x2", String(WIDTH - MARGIN.right));
    base.setAttribute("y1", String(HEIGHT - MARGIN.bottom));
    base.setAttribute("y2", String(HEIGHT - MARGIN.bottom));
    base.setAttribute("class", "axis-line");
    svg.append(base, tpLine, fdpLine);

    for (const t of ticks(0, tpMax, 4)) {
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(MARGIN.left - 6));
      label.setAttribute("y", String(yTp.apply(t) + 3));
      label.setAttribute("text-anchor", "end");
      label.setAttribute("class", "tick");
      label.textContent = t.toFixed(0);
      svg.appendChild(label);
    }
    for (const t of [0, 0.5, 1]) {
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(WIDTH - MARGIN.right + 6));
      label.setAttribute("y", String(yFdp.apply(t) + 3));
      label.setAttribute("class", "tick");
      label.textContent = t.toFixed(1);
      svg.appendChild(label);
    }
    this.chart.replaceChildren(svg);
  }
}
