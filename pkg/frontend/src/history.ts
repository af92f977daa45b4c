import { formatFdp } from "./format.js";
import type { BoundResponse } from "./types.js";

export type HistoryEntry = {
  label: string;
  method: string;
  size: number;
  v: number;
  tpLower: number;
  fdpUpper: number;
};

export const HISTORY_LIMIT = 50;

/** Session-local record of past selections and their bounds, newest first. */
export class SelectionHistory {
  readonly entries: HistoryEntry[] = [];

  push(label: string, bound: BoundResponse): HistoryEntry {
    const entry: HistoryEntry = {
      label,
      method: bound.method,
      size: bound.size,
      v: bound.V,
      tpLower: bound.tp_lower,
      fdpUpper: bound.fdp_upper,
    };
    this.entries.unshift(entry);
    if (this.entries.length > HISTORY_LIMIT) {
      this.entries.length = HISTORY_LIMIT;
    }
    return entry;
  }
}

export function renderHistory(container: HTMLElement, history: SelectionHistory): void {
  container.replaceChildren();
  if (history.entries.length === 0) {
    const empty = document.createElement("p");
    empty.className = "history-empty";
    empty.textContent = "No selections yet — brush the plot or apply thresholds.";
    container.appendChild(empty);
    return;
  }
  const table = document.createElement("table");
  table.className = "history-table";
  const head = table.createTHead().insertRow();
  for (const title of ["selection", "method", "n", "TP ≥", "FDP ≤"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const entry of history.entries) {
    const row = body.insertRow();
    row.insertCell().textContent = entry.label;
    row.insertCell().textContent = entry.method;
    const sizeCell = row.insertCell();
    sizeCell.textContent = String(entry.size);
    sizeCell.dataset.field = "size";
    const tpCell = row.insertCell();
    tpCell.textContent = String(entry.tpLower);
    tpCell.dataset.field = "tp";
    const fdpCell = row.insertCell();
    fdpCell.textContent = formatFdp(entry.fdpUpper);
    fdpCell.dataset.field = "fdp";
  }
  container.appendChild(table);
}
