// Parse the server's line-oriented model report. The `?` suffix marks an
// unknown member and is kept as a flag so views can render it faithfully.

export interface PartialSetEntry {
  label: string;
  unknown: boolean;
}

export interface PredRow {
  name: string;
  world?: string;
  time?: string;
  entries: PartialSetEntry[];
}

export interface SortRow {
  name: string;
  elements: string[];
}

export interface ModelReport {
  depth?: number;
  worlds: string[];
  times: string[];
  sorts: SortRow[];
  preds: PredRow[];
}

/** Split on a separator at paren depth zero, so tuple labels survive. */
export function splitTopLevel(text: string, separator: string): string[] {
  const parts: string[] = [];
  let depth = 0;
  let current = "";
  for (const ch of text) {
    if (ch === "(") depth += 1;
    if (ch === ")") depth -= 1;
    if (ch === separator && depth === 0) {
      parts.push(current);
      current = "";
      continue;
    }
    current += ch;
  }
  if (current.trim() !== "" || parts.length > 0) parts.push(current);
  return parts.map((p) => p.trim()).filter((p) => p !== "");
}

export function parsePartialSet(text: string): PartialSetEntry[] {
  const inner = text.trim().replace(/^\{/, "").replace(/\}$/, "");
  return splitTopLevel(inner, ",").map((label) =>
    label.endsWith("?")
      ? { label: label.slice(0, -1), unknown: true }
      : { label, unknown: false },
  );
}

export function parseModelReport(text: string): ModelReport {
  const report: ModelReport = { worlds: [], times: [], sorts: [], preds: [] };
  for (const line of text.split("\n")) {
    if (line === "MODEL" || line.trim() === "") continue;
    if (line.startsWith("DEPTH: ")) {
      report.depth = Number(line.slice("DEPTH: ".length));
    } else if (line.startsWith("WORLDS: ")) {
      report.worlds = line.slice("WORLDS: ".length).split(", ");
    } else if (line.startsWith("TIMES: ")) {
      report.times = line.slice("TIMES: ".length).split(", ");
    } else if (line.startsWith("SORT ")) {
      const [head, rest] = splitOnce(line.slice("SORT ".length), ": ");
      report.sorts.push({ name: head, elements: splitTopLevel(rest, ",") });
    } else if (line.startsWith("PRED ")) {
      const [head, rest] = splitOnce(line.slice("PRED ".length), ": ");
      const atIndex = head.indexOf(" @");
      let name = head;
      let world: string | undefined;
      let time: string | undefined;
      if (atIndex >= 0) {
        name = head.slice(0, atIndex);
        const at = head.slice(atIndex + 2);
        const dot = at.indexOf(".");
        world = dot >= 0 ? at.slice(0, dot) : at;
        time = dot >= 0 ? at.slice(dot + 1) : undefined;
      }
      report.preds.push({ name, world, time, entries: parsePartialSet(rest) });
    } else {
      throw new Error(`unrecognized report line: ${line}`);
    }
  }
  if (report.worlds.length === 0) report.worlds = ["w0"];
  if (report.times.length === 0) report.times = ["t0"];
  return report;
}

function splitOnce(text: string, separator: string): [string, string] {
  const at = text.indexOf(separator);
  if (at < 0) throw new Error(`expected '${separator}' in: ${text}`);
  return [text.slice(0, at), text.slice(at + separator.length)];
}
