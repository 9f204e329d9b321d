import { describe, expect, it } from "vitest";

import { highlightHtml, highlightProgram } from "../src/highlight.js";

const PROGRAM = "FinalValue(four_box_model(SetTo(N,4000),SetTo(Fwn,5000)),M_n)";

describe("highlightProgram", () => {
  it("classifies names, numbers, and punctuation", () => {
    const spans = highlightProgram("SetTo(Fwn,5.8e4)");
    expect(spans).toEqual([
      { text: "SetTo", cls: "name" },
      { text: "(", cls: "punct" },
      { text: "Fwn", cls: "name" },
      { text: ",", cls: "punct" },
      { text: "5.8e4", cls: "number" },
      { text: ")", cls: "punct" },
    ]);
  });

  it("keeps scientific notation as a single number span", () => {
    const spans = highlightProgram("IncreaseBy(epsilon,4.24e-06)");
    const numbers = spans.filter((s) => s.cls === "number");
    expect(numbers).toEqual([{ text: "4.24e-06", cls: "number" }]);
  });

  it("loses nothing: spans concatenate back to the input", () => {
    const spans = highlightProgram(PROGRAM);
    expect(spans.map((s) => s.text).join("")).toBe(PROGRAM);
  });
});

describe("highlightHtml", () => {
  it("wraps spans in classed elements and escapes markup", () => {
    const html = highlightHtml("SetTo(N,4000)");
    expect(html).toContain('<span class="tok-name">SetTo</span>');
    expect(html).toContain('<span class="tok-number">4000</span>');
    expect(highlightHtml("<x>")).toBe(
      '<span class="tok-punct">&lt;</span><span class="tok-name">x</span><span class="tok-punct">&gt;</span>',
    );
  });
});
