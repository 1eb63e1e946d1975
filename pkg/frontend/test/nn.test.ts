import { describe, expect, it } from "vitest";

import { nnWeights, recomputeNnGroup } from "../src/nn.js";
import type { RawNnEntry } from "../src/types.js";

describe("nnWeights", () => {
  it("normalizes inverse distances", () => {
    const p = nnWeights([1.0, 2.0]);
    expect(p[0]).toBeCloseTo(2 / 3, 12);
    expect(p[1]).toBeCloseTo(1 / 3, 12);
    expect(p[0] + p[1]).toBeCloseTo(1.0, 12);
  });

  it("is scale invariant", () => {
    const ds = [0.3, 0.7, 1.1];
    const p = nnWeights(ds);
    const q = nnWeights(ds.map((d) => 5 * d));
    p.forEach((pi, i) => expect(pi).toBeCloseTo(q[i], 12));
  });

  it("splits the mass equally among zero distances in limit mode", () => {
    expect(nnWeights([0, 0.5], "limit")).toEqual([1, 0]);
    expect(nnWeights([0, 0, 0.5], "limit")).toEqual([0.5, 0.5, 0]);
  });

  it("zeroes zero-distance weights in paper-literal mode", () => {
    const p = nnWeights([0, 0.5, 1.0], "paper-literal");
    expect(p[0]).toBe(0);
    expect(p[1]).toBeCloseTo(2 / 3, 12);
    expect(p[2]).toBeCloseTo(1 / 3, 12);
    expect(nnWeights([0, 0], "paper-literal")).toEqual([0, 0]);
  });

  it("rejects empty and negative inputs", () => {
    expect(() => nnWeights([])).toThrow();
    expect(() => nnWeights([-0.1])).toThrow();
  });
});

function entry(partial: Partial<RawNnEntry> & { instance_id: string; d: number }): RawNnEntry {
  return { label: partial.instance_id, t_closest: 1.0, hit: false, ...partial };
}

describe("recomputeNnGroup", () => {
  const raw = [
    entry({ instance_id: "a", d: 0.1 }),
    entry({ instance_id: "b", d: 0.3, hit: true }),
    entry({ instance_id: "c", d: 0.6 }),
  ];

  it("keeps entries under the threshold or directly hit", () => {
    const group = recomputeNnGroup(raw, 0.25, "limit", new Set());
    expect(group.map((e) => e.instance_id)).toEqual(["a", "b"]);
    expect(group[0].p + group[1].p).toBeCloseTo(1.0, 12);
  });

  it("drops excluded labels and renormalizes", () => {
    const group = recomputeNnGroup(raw, 0.25, "limit", new Set(["a"]));
    expect(group.map((e) => e.instance_id)).toEqual(["b"]);
    expect(group[0].p).toBeCloseTo(1.0, 12);
  });

  it("returns an empty group when nothing qualifies", () => {
    expect(recomputeNnGroup(raw, 0.05, "limit", new Set(["b"]))).toEqual([]);
  });
});
