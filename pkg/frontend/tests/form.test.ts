import { describe, expect, it } from "vitest";

import { JudgmentForm } from "../src/form.js";
import { SEVERITY_DEFINITIONS, SEVERITY_LEVELS } from "../src/types.js";

describe("JudgmentForm", () => {
  it("disables submit until all three fields are set", () => {
    const form = new JudgmentForm();
    expect(form.canSubmit).toBe(false);
    form.setValidity("valid");
    expect(form.canSubmit).toBe(false);
    form.setAgreement(4);
    expect(form.canSubmit).toBe(false);
    form.setSeverity("Some");
    expect(form.canSubmit).toBe(true);
  });

  it("produces a record bit-compatible with the service schema", () => {
    const form = new JudgmentForm();
    form.setValidity("valid");
    form.setAgreement(4);
    form.setSeverity("Some");
    const record = form.toRecord("ann-a", "claim-7");
    expect(record).toEqual({
      annotator: "ann-a",
      claim_id: "claim-7",
      validity: "valid",
      agreement: 4,
      severity: "Some",
    });
    expect(Object.keys(record).sort()).toEqual([
      "agreement",
      "annotator",
      "claim_id",
      "severity",
      "validity",
    ]);
  });

  it("rejects out-of-range agreement", () => {
    const form = new JudgmentForm();
    expect(() => form.setAgreement(6)).toThrow(RangeError);
    expect(() => form.setAgreement(0)).toThrow(RangeError);
    expect(() => form.setAgreement(2.5)).toThrow(RangeError);
  });

  it("maps keyboard keys 1-5 to the same record as the click path", () => {
    const clicked = new JudgmentForm();
    clicked.setValidity("invalid");
    clicked.setAgreement(3);
    clicked.setSeverity("Pivotal");

    const typed = new JudgmentForm();
    typed.setValidity("invalid");
    expect(typed.handleKey("3")).toBe(true);
    typed.setSeverity("Pivotal");

    expect(typed.toRecord("a", "c")).toEqual(clicked.toRecord("a", "c"));
  });

  it("ignores non-digit keys", () => {
    const form = new JudgmentForm();
    expect(form.handleKey("x")).toBe(false);
    expect(form.handleKey("6")).toBe(false);
    expect(form.agreement).toBeNull();
  });

  it("throws when reading an incomplete record", () => {
    const form = new JudgmentForm();
    form.setValidity("valid");
    expect(() => form.toRecord("a", "c")).toThrow(/disabled/);
  });

  it("ships all five severity definitions verbatim", () => {
    expect(SEVERITY_LEVELS).toHaveLength(5);
    expect(SEVERITY_DEFINITIONS.None).toMatch(/^Purely factual or administrative\./);
    expect(SEVERITY_DEFINITIONS.Pivotal).toMatch(/Changes fundable\/non-fundable status\.$/);
  });
});
