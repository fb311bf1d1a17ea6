import { describe, expect, it } from "vitest";

import { firstUnknownLeaf, parseTrace, walk } from "../src/trace";

const TRACE = `unknown forall u:entity. man(u) -> walk(u) @(w0,t0)
  true man(J) -> walk(J) @(w0,t0)
    true man(J) @(w0,t0)
    true walk(J) @(w0,t0)
  true man(M) -> walk(M) @(w0,t0)
    false man(M) @(w0,t0)
    true walk(M) @(w0,t0)
  unknown man(B) -> walk(B) @(w0,t0)
    true man(B) @(w0,t0)
    unknown walk(B) @(w0,t0)`;

describe("parseTrace", () => {
  it("builds the tree by indentation", () => {
    const root = parseTrace(TRACE);
    expect(root.value).toBe("unknown");
    expect(root.children).toHaveLength(3);
    expect(root.children[2].children[1].formula).toBe("walk(B)");
    expect([...walk(root)]).toHaveLength(10);
  });

  it("keeps witnesses", () => {
    const root = parseTrace(
      "true exists u:entity. man(u) & walk(u) @(w0,t0) [witness=J]\n" +
        "  true man(J) & walk(J) @(w0,t0)",
    );
    expect(root.witness).toBe("J");
    expect(root.children[0].witness).toBeUndefined();
  });

  it("finds the first blocking unknown leaf", () => {
    const node = firstUnknownLeaf(parseTrace(TRACE));
    expect(node?.formula).toBe("walk(B)");
  });

  it("rejects malformed lines", () => {
    expect(() => parseTrace("hello")).toThrow(/unrecognized/);
  });
});
