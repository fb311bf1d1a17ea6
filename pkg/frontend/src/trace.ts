// Parse the server's indented evaluation trace into a tree the view can
// collapse. Node values are kept verbatim; nothing is re-evaluated here.

export interface TraceNode {
  value: "true" | "false" | "unknown";
  formula: string;
  world: string;
  time: string;
  witness?: string;
  children: TraceNode[];
}

const LINE = /^(\s*)(true|false|unknown) (.*) @\(([^,()]+),([^()]+)\)(?: \[witness=(.*)\])?$/;

export function parseTrace(text: string): TraceNode {
  const lines = text.split("\n").filter((l) => l.trim() !== "");
  if (lines.length === 0) throw new Error("empty trace");
  const stack: { node: TraceNode; depth: number }[] = [];
  let root: TraceNode | null = null;

  for (const line of lines) {
    const match = LINE.exec(line);
    if (!match) throw new Error(`unrecognized trace line: ${line}`);
    const [, indent, value, formula, world, time, witness] = match;
    if (indent.length % 2 !== 0) throw new Error(`odd indentation: ${line}`);
    const depth = indent.length / 2;
    const node: TraceNode = {
      value: value as TraceNode["value"],
      formula,
      world,
      time,
      witness: witness || undefined,
      children: [],
    };
    while (stack.length > 0 && stack[stack.length - 1].depth >= depth) {
      stack.pop();
    }
    if (stack.length === 0) {
      if (root !== null) throw new Error("trace has more than one root");
      root = node;
    } else {
      stack[stack.length - 1].node.children.push(node);
    }
    stack.push({ node, depth });
  }
  if (root === null) throw new Error("empty trace");
  return root;
}

export function* walk(node: TraceNode): Generator<TraceNode> {
  yield node;
  for (const child of node.children) {
    yield* walk(child);
  }
}

/** First unknown-valued leaf in depth-first order (the blocking atom). */
export function firstUnknownLeaf(node: TraceNode): TraceNode | null {
  for (const n of walk(node)) {
    if (n.children.length === 0 && n.value === "unknown") return n;
  }
  return null;
}
