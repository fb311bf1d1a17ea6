// Session panel state machine. Every field is derived from server
// responses: actions issue the wire call, await the authoritative result,
// and refetch whatever it invalidated. The pending-choice modal is visible
// exactly when the server's last evaluation returned a pending choice.

import { ApiClient, PendingChoice, SessionOptions } from "./api";
import { ModelReport, parseModelReport } from "./report";
import { parseTrace, TraceNode } from "./trace";

export interface GridCell {
  world: string;
  time: string;
  value: string;
}

export interface PanelState {
  sessionId: string | null;
  reportText: string;
  report: ModelReport | null;
  formula: string;
  lastValue: string | null;
  trace: TraceNode | null;
  grid: GridCell[];
  pending: PendingChoice | null;
  history: string[];
  error: string | null;
  busy: boolean;
}

const INITIAL: PanelState = {
  sessionId: null,
  reportText: "",
  report: null,
  formula: "",
  lastValue: null,
  trace: null,
  grid: [],
  pending: null,
  history: [],
  error: null,
  busy: false,
};

type Listener = (state: PanelState) => void;

export class SessionPanel {
  state: PanelState = { ...INITIAL };
  private listeners: Listener[] = [];

  constructor(private readonly client: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(partial: Partial<PanelState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  private requireSession(): string {
    if (this.state.sessionId === null) throw new Error("no session loaded");
    return this.state.sessionId;
  }

  /** Run an action; service errors land in state.error, never vanish. */
  private async act(run: () => Promise<void>): Promise<void> {
    this.set({ busy: true, error: null });
    try {
      await run();
    } catch (err) {
      this.set({ error: err instanceof Error ? err.message : String(err) });
    } finally {
      this.set({ busy: false });
    }
  }

  async loadTheory(theory: string, options: SessionOptions = {}): Promise<void> {
    await this.act(async () => {
      const created = await this.client.createSession(theory, options);
      this.set({
        ...INITIAL,
        sessionId: created.session_id,
        reportText: created.report,
        report: parseModelReport(created.report),
      });
      await this.refreshHistory();
    });
  }

  async evalFormula(formula: string): Promise<void> {
    await this.act(() => this.runEval(formula));
  }

  private async runEval(formula: string): Promise<void> {
    const id = this.requireSession();
    const result = await this.client.evalFormula(id, formula);
    const trace = parseTrace(String(result.data.trace ?? ""));
    this.set({
      formula,
      lastValue: String(result.data.value ?? ""),
      trace,
      pending: result.pending,
    });
    await this.refreshGrid(formula);
  }

  private async refreshGrid(formula: string): Promise<void> {
    const id = this.requireSession();
    const report = this.state.report;
    if (report === null) return;
    const cells: GridCell[] = [];
    for (const world of report.worlds) {
      for (const time of report.times) {
        const result = await this.client.evalFormula(id, formula, world, time);
        cells.push({ world, time, value: String(result.data.value ?? "") });
      }
    }
    this.set({ grid: cells });
  }

  async resolvePending(action: "force-true" | "force-false" | "leave-unknown"): Promise<void> {
    const pending = this.state.pending;
    if (pending === null) return;
    if (action === "leave-unknown") {
      this.set({ pending: null });
      return;
    }
    await this.force(pending.atom, action === "force-true" ? "true" : "false");
  }

  async force(atom: string, value: "true" | "false"): Promise<void> {
    await this.act(async () => {
      await this.client.force(this.requireSession(), atom, value);
      await this.afterMutation();
    });
  }

  async addElement(sort: string, name: string): Promise<void> {
    await this.act(async () => {
      await this.client.addElement(this.requireSession(), sort, name);
      await this.afterMutation();
    });
  }

  async eqforce(left: string, right: string): Promise<void> {
    await this.act(async () => {
      await this.client.eq(this.requireSession(), left, right, true);
      await this.afterMutation();
    });
  }

  async undo(): Promise<void> {
    await this.act(async () => {
      await this.client.undo(this.requireSession());
      await this.afterMutation();
    });
  }

  /** Refetch the snapshot and re-evaluate the last formula against it. */
  private async afterMutation(): Promise<void> {
    await this.refreshModel();
    await this.refreshHistory();
    if (this.state.formula !== "") {
      await this.runEval(this.state.formula);
    } else {
      this.set({ pending: null });
    }
  }

  private async refreshModel(): Promise<void> {
    const result = await this.client.getModel(this.requireSession());
    this.set({
      reportText: result.output,
      report: parseModelReport(result.output),
    });
  }

  private async refreshHistory(): Promise<void> {
    const result = await this.client.history(this.requireSession());
    const commands = result.data.commands;
    this.set({ history: Array.isArray(commands) ? commands.map(String) : [] });
  }
}
