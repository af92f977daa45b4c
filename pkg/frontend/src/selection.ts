import { displayY } from "./scales.js";
import type { SelectionRequest, VolcanoPoint } from "./types.js";

/** A brush rectangle in data coordinates: x is log fold change, y is -log10 p.
 *  Corners may be given in any order. */
export type BrushRect = { x0: number; x1: number; y0: number; y1: number };

export function normalizeRect(rect: BrushRect): BrushRect {
  return {
    x0: Math.min(rect.x0, rect.x1),
    x1: Math.max(rect.x0, rect.x1),
    y0: Math.min(rect.y0, rect.y1),
    y1: Math.max(rect.y0, rect.y1),
  };
}

/** Ids of the points inside the rectangle (inclusive bounds). Points without
 *  a fold change have no x position and are never brushable. */
export function resolveBrush(points: VolcanoPoint[], rect: BrushRect): string[] {
  const r = normalizeRect(rect);
  const ids: string[] = [];
  for (const pt of points) {
    if (pt.log_fc === null) {
      continue;
    }
    const y = displayY(pt.p);
    if (pt.log_fc >= r.x0 && pt.log_fc <= r.x1 && y >= r.y0 && y <= r.y1) {
      ids.push(pt.id);
    }
  }
  return ids;
}

/** Fold-change threshold pair with a BH-style p cutoff; resolved server-side. */
export function thresholdSelection(
  fcAbove: number,
  fcBelow: number,
  bhLevel: number,
): SelectionRequest {
  return { fc_above: fcAbove, fc_below: fcBelow, bh_level: bhLevel };
}

export function selectAll(): SelectionRequest {
  return {};
}
