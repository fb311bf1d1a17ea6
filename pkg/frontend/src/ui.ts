// DOM rendering. Views are pure functions of PanelState; all interaction
// goes back through SessionPanel actions.

import { SessionPanel, PanelState, GridCell } from "./state";
import { TraceNode } from "./trace";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mount(root: HTMLElement, panel: SessionPanel, initialTheory: string): void {
  root.innerHTML = "";
  const layout = el("div", "layout");
  const left = el("div", "left-pane");
  const right = el("div", "right-pane");
  layout.append(left, right);
  root.append(layout);

  // --- left: theory editor + load controls + history ---
  const editor = el("textarea", "theory-editor");
  editor.value = initialTheory;
  editor.rows = 18;
  const depthInput = el("input");
  depthInput.type = "number";
  depthInput.value = "2";
  depthInput.min = "0";
  const modeSelect = el("select");
  for (const mode of ["paper", "exhaustive"]) {
    const option = el("option", undefined, mode);
    option.value = mode;
    modeSelect.append(option);
  }
  const loadButton = el("button", "load", "Load theory");
  loadButton.onclick = () =>
    void panel.loadTheory(editor.value, {
      depth: Number(depthInput.value),
      mode: modeSelect.value as "paper" | "exhaustive",
    });
  const controls = el("div", "controls");
  controls.append(loadButton, el("span", undefined, " depth "), depthInput, el("span", undefined, " mode "), modeSelect);

  const historyBox = el("div", "history");
  const undoButton = el("button", "undo", "Undo");
  undoButton.onclick = () => void panel.undo();
  left.append(editor, controls, undoButton, historyBox);

  // --- right: formula bar, grid, model view, trace ---
  const formulaInput = el("input", "formula-input");
  formulaInput.placeholder = "forall u:entity. (man(u) -> walk(u))";
  formulaInput.size = 60;
  const evalButton = el("button", "eval", "Evaluate");
  evalButton.onclick = () => void panel.evalFormula(formulaInput.value);
  const errorBox = el("div", "error");
  const valueBox = el("div", "value");
  const gridBox = el("div", "grid");
  const modelBox = el("div", "model-view");
  const traceBox = el("div", "trace-view");
  const modal = el("div", "modal hidden");
  right.append(formulaInput, evalButton, errorBox, valueBox, gridBox, modelBox, traceBox, modal);

  panel.subscribe((state) => {
    renderError(errorBox, state);
    renderValue(valueBox, state);
    renderGrid(gridBox, state.grid);
    renderModel(modelBox, state);
    renderTrace(traceBox, state);
    renderHistory(historyBox, state);
    renderModal(modal, panel, state);
  });
}

function renderError(box: HTMLElement, state: PanelState): void {
  box.textContent = state.error ?? "";
  box.classList.toggle("hidden", state.error === null);
}

function renderValue(box: HTMLElement, state: PanelState): void {
  box.textContent = state.lastValue === null ? "" : `VALUE: ${state.lastValue}`;
  box.dataset.value = state.lastValue ?? "";
}

function renderGrid(box: HTMLElement, cells: GridCell[]): void {
  box.innerHTML = "";
  if (cells.length === 0) return;
  const worlds = [...new Set(cells.map((c) => c.world))];
  const times = [...new Set(cells.map((c) => c.time))];
  const table = el("table", "world-grid");
  const head = el("tr");
  head.append(el("th"));
  for (const time of times) head.append(el("th", undefined, time));
  table.append(head);
  for (const world of worlds) {
    const row = el("tr");
    row.append(el("th", undefined, world));
    for (const time of times) {
      const cell = cells.find((c) => c.world === world && c.time === time);
      const td = el("td", `truth-${cell?.value ?? "none"}`, cell?.value ?? "");
      row.append(td);
    }
    table.append(row);
  }
  box.append(table);
}

function renderModel(box: HTMLElement, state: PanelState): void {
  box.innerHTML = "";
  const report = state.report;
  if (report === null) return;
  for (const sort of report.sorts) {
    box.append(el("div", "sort-row", `${sort.name}: ${sort.elements.join(", ")}`));
  }
  for (const pred of report.preds) {
    const where = pred.world ? ` @${pred.world}${pred.time ? "." + pred.time : ""}` : "";
    const row = el("div", "pred-row");
    row.append(el("span", "pred-name", `${pred.name}${where}: `));
    const body = el("span", "pred-set");
    body.append(document.createTextNode("{"));
    pred.entries.forEach((entry, index) => {
      if (index > 0) body.append(document.createTextNode(", "));
      const span = el(
        "span",
        entry.unknown ? "member unknown" : "member",
        entry.unknown ? `${entry.label}?` : entry.label,
      );
      body.append(span);
    });
    body.append(document.createTextNode("}"));
    row.append(body);
    box.append(row);
  }
}

function renderTrace(box: HTMLElement, state: PanelState): void {
  box.innerHTML = "";
  if (state.trace === null) return;
  box.append(traceNode(state.trace, state));
}

function traceNode(node: TraceNode, state: PanelState): HTMLElement {
  const label = `${node.value} ${node.formula} @(${node.world},${node.time})` +
    (node.witness ? ` [witness=${node.witness}]` : "");
  if (node.children.length === 0) {
    const leaf = el("div", `trace-leaf truth-${node.value}`, label);
    if (node.value === "unknown" && state.pending && node.formula === state.pending.atom) {
      leaf.classList.add("blocking");
      leaf.title = "blocking atom: resolve via the pending-choice dialog";
    }
    return leaf;
  }
  const details = el("details", `trace-node truth-${node.value}`);
  details.open = node.value === "unknown";
  const summary = el("summary", undefined, label);
  details.append(summary);
  for (const child of node.children) details.append(traceNode(child, state));
  return details;
}

function renderHistory(box: HTMLElement, state: PanelState): void {
  box.innerHTML = "";
  box.append(el("div", "history-title", "History"));
  state.history.forEach((command, index) => {
    box.append(el("div", "history-line", `${index + 1}: ${command}`));
  });
}

function renderModal(box: HTMLElement, panel: SessionPanel, state: PanelState): void {
  box.innerHTML = "";
  box.classList.toggle("hidden", state.pending === null);
  if (state.pending === null) return;
  const pending = state.pending;
  box.append(el("div", "modal-title", `Unknown atom: ${pending.atom}`));
  box.append(el("div", "modal-sub", `while evaluating: ${pending.formula}`));
  const buttons = el("div", "modal-buttons");
  const forceTrue = el("button", "force-true", "Force true");
  forceTrue.onclick = () => void panel.resolvePending("force-true");
  const forceFalse = el("button", "force-false", "Force false");
  forceFalse.onclick = () => void panel.resolvePending("force-false");
  const leave = el("button", "leave-unknown", "Leave unknown");
  leave.onclick = () => void panel.resolvePending("leave-unknown");
  buttons.append(forceTrue, forceFalse, leave);

  const addRow = el("div", "modal-add");
  const sortInput = el("input");
  sortInput.placeholder = "sort";
  sortInput.size = 8;
  const nameInput = el("input");
  nameInput.placeholder = "new element";
  nameInput.size = 10;
  const addButton = el("button", "add-element", "Add element");
  addButton.onclick = () => void panel.addElement(sortInput.value, nameInput.value);
  addRow.append(sortInput, nameInput, addButton);

  box.append(buttons, addRow);
}
