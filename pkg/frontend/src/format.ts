import type { BoundResponse } from "./types.js";

/** Human-readable guarantee line; the numbers are the server's verbatim. */
export function formatGuarantee(bound: BoundResponse): string {
  return `TP ≥ ${bound.tp_lower} · FDP ≤ ${formatFdp(bound.fdp_upper)}`;
}

export function formatFdp(value: number): string {
  return value.toFixed(3);
}

export function formatLambda(value: number | null): string {
  return value === null ? "—" : value.toPrecision(4);
}
