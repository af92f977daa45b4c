import { ApiClient } from "./api.js";
import { EnvelopeView } from "./envelope.js";
import { formatGuarantee, formatLambda } from "./format.js";
import { renderHistory, SelectionHistory } from "./history.js";
import { markStale, StatusBanner } from "./status.js";
import { VolcanoView } from "./volcano.js";
import type { Meta, SelectionRequest, VolcanoPoint } from "./types.js";

export type App = {
  meta: Meta;
  points: VolcanoPoint[];
  history: SelectionHistory;
  volcano: VolcanoView | null;
  runQuery(selection: SelectionRequest, label: string): Promise<void>;
  loadEnvelope(): Promise<void>;
  currentMethod(): { method: string; template?: string };
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

/** Assemble the explorer inside `root`. The client owns selection geometry
 *  and presentation; every statistical number is a server response field. */
export async function createApp(root: HTMLElement, api: ApiClient): Promise<App> {
  const meta = await api.fetchMeta();
  let points: VolcanoPoint[] = [];
  try {
    points = await api.fetchPoints();
  } catch {
    points = []; // p-value-only session: no volcano, envelope still works
  }

  root.replaceChildren();
  const banner = new StatusBanner(root);
  const layout = el("div", "layout");
  root.appendChild(layout);

  const plotPane = el("div", "plot-pane");
  const sidePane = el("div", "side-pane");
  layout.append(plotPane, sidePane);

  const title = el("h1", undefined, "post hoc bound explorer");
  sidePane.appendChild(title);
  const metaLine = el("p", "meta-line",
    `m=${meta.m} · alpha=${meta.alpha}` +
    (meta.n1 !== null ? ` · groups ${meta.n1}/${meta.n2}` : ""));
  sidePane.appendChild(metaLine);

  const methodSelect = el("select");
  methodSelect.id = "method";
  for (const method of meta.methods) {
    const option = document.createElement("option");
    option.value = method;
    option.textContent = method === "simes" ? "Simes" :
      method === "bonferroni" ? "Bonferroni" : method.replace(":", " · ");
    methodSelect.appendChild(option);
  }
  const lambdaNote = el("span", "lambda-note");
  const methodRow = el("div", "control-row");
  methodRow.append(el("label", undefined, "method "), methodSelect, lambdaNote);
  sidePane.appendChild(methodRow);

  const readout = el("div", "readout");
  readout.id = "readout";
  readout.textContent = "no selection";
  sidePane.appendChild(readout);

  const thresholdForm = el("div", "control-row threshold-form");
  const fcAbove = el("input");
  fcAbove.id = "fc-above";
  fcAbove.type = "number";
  fcAbove.step = "0.1";
  fcAbove.value = "0.2";
  const fcBelow = el("input");
  fcBelow.id = "fc-below";
  fcBelow.type = "number";
  fcBelow.step = "0.1";
  fcBelow.value = "-0.2";
  const bhLevel = el("input");
  bhLevel.id = "bh-level";
  bhLevel.type = "number";
  bhLevel.step = "0.01";
  bhLevel.value = "0.05";
  const applyThresholds = el("button", undefined, "apply thresholds");
  applyThresholds.id = "apply-thresholds";
  applyThresholds.type = "button";
  const selectAllButton = el("button", undefined, "select all");
  selectAllButton.id = "select-all";
  selectAllButton.type = "button";
  thresholdForm.append(
    el("label", undefined, "log fc >"), fcAbove,
    el("label", undefined, "or <"), fcBelow,
    el("label", undefined, "BH level"), bhLevel,
    applyThresholds, selectAllButton,
  );
  sidePane.appendChild(thresholdForm);

  const historyPanel = el("div", "history-panel");
  historyPanel.id = "history";
  sidePane.append(el("h2", undefined, "selection history"), historyPanel);

  const volcanoContainer = el("div", "volcano-container");
  volcanoContainer.id = "volcano";
  plotPane.appendChild(volcanoContainer);
  const envelopeContainer = el("div", "envelope-container");
  envelopeContainer.id = "envelope";
  plotPane.append(el("h2", undefined, "confidence envelope"), envelopeContainer);

  const history = new SelectionHistory();
  renderHistory(historyPanel, history);

  const currentMethod = (): { method: string; template?: string } => {
    const value = methodSelect.value || "simes";
    if (value.startsWith("calibrated:")) {
      return { method: "calibrated", template: value.split(":", 2)[1] };
    }
    return { method: value };
  };

  const updateLambdaNote = (): void => {
    const { method, template } = currentMethod();
    if (method === "calibrated" && template && template in meta.lambda) {
      lambdaNote.textContent = `lambda=${formatLambda(meta.lambda[template])}`;
    } else {
      lambdaNote.textContent = "";
    }
  };
  updateLambdaNote();

  let inflight: AbortController | null = null;
  let volcano: VolcanoView | null = null;

  const runQuery = async (selection: SelectionRequest, label: string): Promise<void> => {
    inflight?.abort();
    const controller = new AbortController();
    inflight = controller;
    markStale(readout, true);
    const { method, template } = currentMethod();
    try {
      const bound = await api.postBound({ selection, method, template }, controller.signal);
      if (controller !== inflight) {
        return; // superseded by a newer interaction
      }
      markStale(readout, false);
      banner.clear();
      readout.replaceChildren();
      readout.append(
        el("span", "readout-label", `${label} · n=${bound.size}`),
        el("strong", "readout-bound", formatGuarantee(bound)),
        el("span", "readout-method", bound.method),
      );
      history.push(label, bound);
      renderHistory(historyPanel, history);
      volcano?.highlight(bound.ids);
      if (selection.fc_above !== undefined && selection.fc_below !== undefined) {
        volcano?.setThresholdBoxes(selection.fc_above, selection.fc_below, bound.ids);
      } else {
        volcano?.clearThresholdBoxes();
      }
    } catch (error) {
      if ((error as Error).name === "AbortError") {
        return;
      }
      banner.showError(`bound query failed: ${(error as Error).message}`, () => {
        void runQuery(selection, label);
      });
    }
  };

  if (points.length > 0) {
    volcano = new VolcanoView(volcanoContainer, points, {
      onBrush: (ids) => {
        void runQuery({ ids }, `brush[${ids.length}]`);
      },
    });
  } else {
    volcanoContainer.appendChild(
      el("p", "empty-state", "No volcano view: this session has p-values only."),
    );
  }

  const envelope = new EnvelopeView(envelopeContainer, {
    onUseLevelSet: (ids, k) => {
      void runQuery({ ids }, `top-${k}`);
    },
  });
  const loadEnvelope = async (): Promise<void> => {
    const { method, template } = currentMethod();
    try {
      envelope.setData(await api.fetchEnvelope(method, template));
      banner.clear();
    } catch (error) {
      banner.showError(`envelope failed: ${(error as Error).message}`, () => {
        void loadEnvelope();
      });
    }
  };
  await loadEnvelope();

  applyThresholds.addEventListener("click", () => {
    void runQuery(
      {
        fc_above: Number(fcAbove.value),
        fc_below: Number(fcBelow.value),
        bh_level: Number(bhLevel.value),
      },
      "thresholds",
    );
  });
  selectAllButton.addEventListener("click", () => {
    void runQuery({}, "all");
  });
  methodSelect.addEventListener("change", () => {
    updateLambdaNote();
    void loadEnvelope();
  });

  return { meta, points, history, volcano, runQuery, loadEnvelope, currentMethod };
}
