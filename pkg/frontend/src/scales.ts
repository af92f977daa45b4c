/** Plot geometry helpers: coordinate scales and the display transform. */

export type Scale = {
  apply(x: number): number;
  invert(px: number): number;
};

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    apply: (x) => r0 + ((x - d0) / span) * (r1 - r0),
    invert: (px) => d0 + ((px - r0) / (r1 - r0 || 1)) * span,
  };
}

/** Cap for -log10(p) when p underflows to 0. */
export const MAX_NEG_LOG10 = 320;

/** Display ordinate of a p-value (presentation only; bounds stay server-side). */
export function displayY(p: number): number {
  if (p <= 0) {
    return MAX_NEG_LOG10;
  }
  return Math.max(0, Math.min(-Math.log10(p), MAX_NEG_LOG10));
}

export function ticks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo) || count < 1) {
    return [lo];
  }
  const rawStep = (hi - lo) / count;
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((s) => s * mag).find((s) => s >= rawStep) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12; v += step) {
    out.push(Number(v.toFixed(12)));
  }
  return out;
}
