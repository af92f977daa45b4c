import { displayY, linearScale, ticks, type Scale } from "./scales.js";
import { resolveBrush, type BrushRect } from "./selection.js";
import type { VolcanoPoint } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 12, right: 16, bottom: 36, left: 46 };

export type VolcanoCallbacks = {
  onBrush(ids: string[], rect: BrushRect): void;
};

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

/** Scatter of (log fold change, -log10 p) with rectangle brushing and shaded
 *  threshold boxes. Rendering only: selections are resolved to ids here, but
 *  every statistical number shown elsewhere comes from the server. */
export class VolcanoView {
  private readonly svg: SVGSVGElement;
  private readonly dots = new Map<string, SVGCircleElement>();
  private readonly boxLayer: SVGGElement;
  private readonly brushLayer: SVGRectElement;
  private readonly xScale: Scale;
  private readonly yScale: Scale;
  private dragStart: { x: number; y: number } | null = null;

  constructor(
    container: HTMLElement,
    private readonly points: VolcanoPoint[],
    private readonly callbacks: VolcanoCallbacks,
  ) {
    container.replaceChildren();
    if (points.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No data loaded.";
      container.appendChild(empty);
      this.svg = svgElement("svg");
      this.boxLayer = svgElement("g");
      this.brushLayer = svgElement("rect");
      this.xScale = linearScale([0, 1], [0, 1]);
      this.yScale = linearScale([0, 1], [0, 1]);
      return;
    }

    const xs = points.filter((p) => p.log_fc !== null).map((p) => p.log_fc as number);
    const ys = points.map((p) => displayY(p.p));
    const xLo = Math.min(0, ...xs) - 0.1;
    const xHi = Math.max(0, ...xs) + 0.1;
    const yHi = Math.max(1, ...ys) * 1.05;
    this.xScale = linearScale([xLo, xHi], [MARGIN.left, WIDTH - MARGIN.right]);
    this.yScale = linearScale([0, yHi], [HEIGHT - MARGIN.bottom, MARGIN.top]);

    this.svg = svgElement("svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      width: WIDTH,
      height: HEIGHT,
      class: "volcano-svg",
    });
    this.boxLayer = svgElement("g", { class: "threshold-boxes" });
    this.svg.appendChild(this.boxLayer);
    this.drawAxes(xLo, xHi, yHi);

    const dotLayer = svgElement("g", { class: "dots" });
    for (const pt of points) {
      const cx = pt.log_fc === null ? this.xScale.apply(0) : this.xScale.apply(pt.log_fc);
      const dot = svgElement("circle", {
        cx,
        cy: this.yScale.apply(displayY(pt.p)),
        r: 3,
        class: pt.log_fc === null ? "dot undefined-fc" : "dot",
        "data-id": pt.id,
      });
      this.dots.set(pt.id, dot);
      dotLayer.appendChild(dot);
    }
    this.svg.appendChild(dotLayer);

    this.brushLayer = svgElement("rect", { class: "brush", visibility: "hidden" });
    this.svg.appendChild(this.brushLayer);
    this.wireBrush();
    container.appendChild(this.svg);
  }

  private drawAxes(xLo: number, xHi: number, yHi: number): void {
    const axis = svgElement("g", { class: "axes" });
    const y0 = HEIGHT - MARGIN.bottom;
    axis.appendChild(svgElement("line", {
      x1: MARGIN.left, y1: y0, x2: WIDTH - MARGIN.right, y2: y0, class: "axis-line",
    }));
    axis.appendChild(svgElement("line", {
      x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: y0, class: "axis-line",
    }));
    for (const t of ticks(xLo, xHi, 8)) {
      const x = this.xScale.apply(t);
      const label = svgElement("text", { x, y: y0 + 16, class: "tick", "text-anchor": "middle" });
      label.textContent = t.toFixed(1);
      axis.appendChild(label);
    }
    for (const t of ticks(0, yHi, 6)) {
      const y = this.yScale.apply(t);
      const label = svgElement("text", {
        x: MARGIN.left - 6, y: y + 3, class: "tick", "text-anchor": "end",
      });
      label.textContent = t.toFixed(0);
      axis.appendChild(label);
    }
    const xTitle = svgElement("text", {
      x: (MARGIN.left + WIDTH - MARGIN.right) / 2, y: HEIGHT - 6,
      class: "axis-title", "text-anchor": "middle",
    });
    xTitle.textContent = "log fold change";
    axis.appendChild(xTitle);
    const yTitle = svgElement("text", {
      x: 12, y: (MARGIN.top + y0) / 2, class: "axis-title",
      transform: `rotate(-90 12 ${(MARGIN.top + y0) / 2})`, "text-anchor": "middle",
    });
    yTitle.textContent = "-log10 p";
    axis.appendChild(yTitle);
    this.svg.appendChild(axis);
  }

  private localPoint(event: PointerEvent): { x: number; y: number } {
    const box = this.svg.getBoundingClientRect();
    const sx = box.width > 0 ? WIDTH / box.width : 1;
    const sy = box.height > 0 ? HEIGHT / box.height : 1;
    return { x: (event.clientX - box.left) * sx, y: (event.clientY - box.top) * sy };
  }

  private wireBrush(): void {
    this.svg.addEventListener("pointerdown", (event) => {
      this.dragStart = this.localPoint(event);
      this.svg.setPointerCapture(event.pointerId);
    });
    this.svg.addEventListener("pointermove", (event) => {
      if (!this.dragStart) {
        return;
      }
      const now = this.localPoint(event);
      const x = Math.min(this.dragStart.x, now.x);
      const y = Math.min(this.dragStart.y, now.y);
      this.brushLayer.setAttribute("x", String(x));
      this.brushLayer.setAttribute("y", String(y));
      this.brushLayer.setAttribute("width", String(Math.abs(now.x - this.dragStart.x)));
      this.brushLayer.setAttribute("height", String(Math.abs(now.y - this.dragStart.y)));
      this.brushLayer.setAttribute("visibility", "visible");
    });
    this.svg.addEventListener("pointerup", (event) => {
      if (!this.dragStart) {
        return;
      }
      const end = this.localPoint(event);
      const rect: BrushRect = {
        x0: this.xScale.invert(this.dragStart.x),
        x1: this.xScale.invert(end.x),
        y0: this.yScale.invert(this.dragStart.y),
        y1: this.yScale.invert(end.y),
      };
      this.dragStart = null;
      this.brushLayer.setAttribute("visibility", "hidden");
      this.callbacks.onBrush(resolveBrush(this.points, rect), rect);
    });
  }

  highlight(ids: string[]): void {
    const chosen = new Set(ids);
    for (const [id, dot] of this.dots) {
      dot.classList.toggle("selected", chosen.has(id));
    }
  }

  /** Shade the two fold-change tails down to the smallest displayed p of the
   *  server-resolved selection (presentation of the server's resolution). */
  setThresholdBoxes(fcAbove: number, fcBelow: number, selectedIds: string[]): void {
    this.boxLayer.replaceChildren();
    const chosen = new Set(selectedIds);
    const tails: Array<{ lo: number; hi: number; member(p: VolcanoPoint): boolean }> = [
      { lo: this.xScale.apply(fcAbove), hi: WIDTH - MARGIN.right,
        member: (p) => p.log_fc !== null && p.log_fc > fcAbove },
      { lo: MARGIN.left, hi: this.xScale.apply(fcBelow),
        member: (p) => p.log_fc !== null && p.log_fc < fcBelow },
    ];
    for (const tail of tails) {
      const inTail = this.points.filter((p) => chosen.has(p.id) && tail.member(p));
      if (inTail.length === 0) {
        continue;
      }
      const yCut = Math.min(...inTail.map((p) => this.yScale.apply(displayY(p.p))));
      this.boxLayer.appendChild(svgElement("rect", {
        x: Math.min(tail.lo, tail.hi),
        y: MARGIN.top,
        width: Math.abs(tail.hi - tail.lo),
        height: Math.max(0, yCut - MARGIN.top),
        class: "threshold-box",
      }));
    }
  }

  clearThresholdBoxes(): void {
    this.boxLayer.replaceChildren();
  }

  get glyphCount(): number {
    return this.dots.size;
  }
}
