import { describe, expect, it } from "vitest";

import type { Snapshot } from "../src/api.js";
import {
  addedTestCases,
  barsTotal,
  probabilityBars,
  renderHistory,
  renderPendingQuery,
  renderProbabilityPanel,
  renderSession,
  renderSolutionDiff,
} from "../src/view.js";

const baseParams = { n_min: 2, n_max: 2, timeout_ms: 1000, pool_size: 1, measure: "ENT" };

const awaiting: Snapshot = {
  id: "s1",
  status: "awaiting_answer",
  mode: "static",
  sigma: 0,
  params: baseParams,
  pending_query: ["E -> ~A"],
  qpartition_sizes: { dx: 1, dnx: 1, dz: 0 },
  leading: [
    { ids: [1], probability: 0.5 },
    { ids: [2], probability: 0.5 },
  ],
  history: [],
  solution: null,
  solution_diagnosis: null,
  error: null,
};

const doneStatic: Snapshot = {
  id: "s1",
  status: "done",
  mode: "static",
  sigma: 0,
  params: baseParams,
  pending_query: null,
  qpartition_sizes: null,
  leading: [{ ids: [5, 7], probability: 1.0 }],
  history: [
    { query: ["E -> ~A"], answer: false },
    { query: ["Y -> ~A"], answer: false },
  ],
  solution: ["A -> E", "X | E -> F & Y & Z", "F -> B", "B -> X", "B -> Z"],
  solution_diagnosis: [5, 7],
  error: null,
};

describe("probability bars", () => {
  it("are proportional and labelled by diagnosis ids", () => {
    const bars = probabilityBars([
      { ids: [2], probability: 0.59 },
      { ids: [5, 7], probability: 0.28 },
      { ids: [1], probability: 0.13 },
    ]);
    expect(bars).toEqual([
      { label: "[2]", percent: 59.0 },
      { label: "[5 7]", percent: 28.0 },
      { label: "[1]", percent: 13.0 },
    ]);
    expect(barsTotal(bars)).toBeCloseTo(100, 0);
  });

  it("renders a single full bar for a lone diagnosis", () => {
    const html = renderProbabilityPanel([{ ids: [5, 7], probability: 1.0 }]);
    expect(html).toContain("width:100%");
    expect(html).toContain("[5 7]");
  });

  it("drops eliminated diagnoses from the chart", () => {
    const before = renderProbabilityPanel(awaiting.leading);
    const after = renderProbabilityPanel([{ ids: [2], probability: 1.0 }]);
    expect(before).toContain("[1]");
    expect(after).not.toContain("[1]");
  });
});

describe("pending query panel", () => {
  it("renders the ASCII formulas verbatim with all three controls", () => {
    const html = renderPendingQuery(["E -> ~A"]);
    expect(html).toContain("E -&gt; ~A");
    for (const control of ["yes", "no", "skip"]) {
      expect(html).toContain(`data-answer="${control}"`);
    }
  });
});

describe("history timeline", () => {
  it("keeps chronological numbering and verdicts", () => {
    const html = renderHistory(doneStatic.history);
    expect(html.indexOf("Q1")).toBeGreaterThan(-1);
    expect(html.indexOf("Q1")).toBeLessThan(html.indexOf("Q2"));
    expect(html).toContain("E -&gt; ~A");
    expect(html.match(/class="no"/g)).toHaveLength(2);
  });
});

describe("solution diff", () => {
  it("names the removed formulas", () => {
    const html = renderSolutionDiff(doneStatic);
    expect(html).toContain("removed: formulas 5, 7");
    expect(html).toContain("no knowledge added");
  });

  it("lists positively answered queries as added knowledge", () => {
    const dynamicDone: Snapshot = {
      ...doneStatic,
      history: [...doneStatic.history, { query: ["E -> Z"], answer: true }],
      solution: [...(doneStatic.solution ?? []), "E -> Z"],
    };
    expect(addedTestCases(dynamicDone.history)).toEqual([["E -> Z"]]);
    const html = renderSolutionDiff(dynamicDone);
    expect(html).toContain("E -&gt; Z");
    expect(html).not.toContain("no knowledge added");
  });
});

describe("golden session render", () => {
  it("awaiting snapshot renders the query page", () => {
    const html = renderSession(awaiting);
    expect(html).toContain("mode <b>static</b>");
    expect(html).toContain("Should the intended KB entail all of:");
    expect(html).toContain("E -&gt; ~A");
    expect(html).toContain("split 1/1/0");
  });

  it("rendering is a pure function of the snapshot", () => {
    expect(renderSession(awaiting)).toEqual(renderSession(structuredClone(awaiting)));
    expect(renderSession(doneStatic)).toEqual(renderSession(structuredClone(doneStatic)));
  });

  it("done snapshot renders the diff view", () => {
    const html = renderSession(doneStatic);
    expect(html).toContain("Debugging finished");
    expect(html).toContain("removed: formulas 5, 7");
  });

  it("computing snapshot shows progress only", () => {
    const html = renderSession({ ...awaiting, status: "computing", pending_query: null });
    expect(html).toContain("computing");
    expect(html).not.toContain("data-answer");
  });

  it("failed snapshot surfaces the error", () => {
    const html = renderSession({ ...awaiting, status: "failed", error: "boom" });
    expect(html).toContain("boom");
  });
});
