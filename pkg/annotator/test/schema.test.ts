import { describe, expect, it } from "vitest";
import { annotateText } from "../src/annotate";
import { validateRecord } from "../src/schema";

function goldenRecord() {
  return annotateText("d", "He is a nurse.", "en");
}

describe("validateRecord", () => {
  it("accepts pipeline output", () => {
    expect(validateRecord(goldenRecord())).toEqual([]);
  });

  it("rejects non-objects and missing fields", () => {
    expect(validateRecord(null).length).toBeGreaterThan(0);
    expect(validateRecord({ doc_id: "d" }).length).toBeGreaterThan(0);
  });

  it("rejects overlapping token spans", () => {
    const record = goldenRecord();
    record.tokens[1].start = record.tokens[0].start;
    const problems = validateRecord(record);
    expect(problems.some((p) => p.includes("overlaps") || p.includes("slice"))).toBe(true);
  });

  it("rejects out-of-range heads", () => {
    const record = goldenRecord();
    record.tokens[0].head = 99;
    expect(validateRecord(record).some((p) => p.includes("head"))).toBe(true);
  });

  it("rejects spans outside the text", () => {
    const record = goldenRecord();
    record.coref.push([[0, 10_000]]);
    expect(validateRecord(record).some((p) => p.includes("outside text"))).toBe(true);
  });

  it("rejects surface/slice mismatches", () => {
    const record = goldenRecord();
    record.tokens[0].surface = "They";
    expect(validateRecord(record).some((p) => p.includes("slice"))).toBe(true);
  });

  it("rejects spans that split multi-byte characters", () => {
    const text = "Η νοσοκόμη ήρθε.";
    const record = annotateText("d", text, "el");
    record.coref.push([[1, 3]]); // byte 1 is inside the 2-byte "Η"
    expect(validateRecord(record).some((p) => p.includes("boundaries"))).toBe(true);
  });
});
