import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { annotateCorpus, annotateText, checkModels } from "../src/annotate";
import { byteSlice } from "../src/bytes";
import { main } from "../src/cli";
import { validateAnnotations } from "../src/validate";

const GOLDEN = path.join(__dirname, "data", "corpus_golden.jsonl");

let tmpDir: string;

beforeAll(() => {
  tmpDir = fs.mkdtempSync(path.join(os.tmpdir(), "annotator-"));
});

afterAll(() => {
  fs.rmSync(tmpDir, { recursive: true, force: true });
});

describe("annotateCorpus on the golden fixture", () => {
  it("produces output that validates with zero violations", () => {
    const out = path.join(tmpDir, "golden.ann.jsonl");
    const result = annotateCorpus({ language: "en", inputPath: GOLDEN, outputPath: out });
    expect(result.written).toBe(4);
    expect(result.degraded).toBe(0);
    const report = validateAnnotations(out);
    expect(report.problems).toEqual([]);
    expect(report.documents).toBe(4);
  });

  it("is deterministic: output matches the committed golden file", () => {
    const out = path.join(tmpDir, "golden-repeat.ann.jsonl");
    annotateCorpus({ language: "en", inputPath: GOLDEN, outputPath: out });
    const expected = fs.readFileSync(path.join(__dirname, "data", "expected_golden.ann.jsonl"), "utf8");
    expect(fs.readFileSync(out, "utf8")).toBe(expected);
  });

  it("tags He in 'He is a nurse.' as Masc/Sing with an nsubj link", () => {
    const doc = annotateText("d", "He is a nurse.", "en");
    const he = doc.tokens.find((t) => t.surface === "He");
    expect(he).toBeDefined();
    expect(he!.gender).toBe("Masc");
    expect(he!.number).toBe("Sing");
    expect(he!.upos).toBe("PRON");
    const nurse = doc.tokens.find((t) => t.surface === "nurse")!;
    expect(he!.head).toBe(nurse.i);
    expect(he!.deprel).toBe("nsubj");
    expect(nurse.deprel).toBe("root");
  });

  // chain CONTENT is model-dependent: this is a smoke test, not a golden one
  it("emits structurally sound coreference chains (smoke)", () => {
    const text =
      "Today the doctor came to the hospital 45 minutes late. " +
      "Consequently, his first appointment had already left.";
    const doc = annotateText("d", text, "en");
    expect(Array.isArray(doc.coref)).toBe(true);
    for (const chain of doc.coref) {
      expect(chain.length).toBeGreaterThanOrEqual(2);
      for (const [s, e] of chain) {
        expect(s).toBeLessThan(e);
        expect(byteSlice(text, s, e).length).toBeGreaterThan(0);
      }
    }
    // the rules happen to link "his" back to the subject noun "doctor"
    const flat = doc.coref.flat().map(([s, e]) => byteSlice(text, s, e));
    expect(flat).toContain("his");
  });

  it("degrades greek to tokens and morphology only", () => {
    const doc = annotateText("d", "Η νοσοκόμη μίλησε. Αυτή έφυγε.", "el");
    expect(doc.coref).toEqual([]);
    const nurse = doc.tokens.find((t) => t.surface === "νοσοκόμη")!;
    expect(nurse.gender).toBe("Fem");
    expect(byteSlice(doc.text, nurse.start, nurse.end)).toBe("νοσοκόμη");
  });

  it("handles french morphology", () => {
    const doc = annotateText("d", "Elle est infirmière.", "fr");
    const elle = doc.tokens.find((t) => t.surface === "Elle")!;
    expect(elle.gender).toBe("Fem");
    const infirmiere = doc.tokens.find((t) => t.surface === "infirmière")!;
    expect(infirmiere.gender).toBe("Fem");
    expect(elle.head).toBe(infirmiere.i);
  });

  it("emits empty annotations for an empty document", () => {
    const doc = annotateText("d", "", "en");
    expect(doc.tokens).toEqual([]);
    expect(doc.sentences).toEqual([]);
  });
});

describe("model configuration", () => {
  it("rejects unknown languages", () => {
    expect(() => checkModels({ language: "xx", inputPath: "a", outputPath: "b" }))
      .toThrow(/unsupported language/);
  });

  it("rejects unknown coreference models", () => {
    expect(() => checkModels({
      language: "en", corefModel: "neural-gpu-v9", inputPath: "a", outputPath: "b",
    })).toThrow(/not available/);
  });

  it("coref-model none disables chains", () => {
    const out = path.join(tmpDir, "nocoref.ann.jsonl");
    annotateCorpus({ language: "en", inputPath: GOLDEN, outputPath: out, corefModel: "none" });
    const lines = fs.readFileSync(out, "utf8").trim().split("\n");
    for (const line of lines) {
      expect(JSON.parse(line).coref).toEqual([]);
    }
  });
});

describe("cli", () => {
  it("annotates and validates end to end", () => {
    const out = path.join(tmpDir, "cli.ann.jsonl");
    expect(main(["--lang", "en", "--in", GOLDEN, "--out", out])).toBe(0);
    expect(main(["validate", "--in", out])).toBe(0);
  });

  it("exits nonzero on model load failure", () => {
    const out = path.join(tmpDir, "cli-bad.ann.jsonl");
    expect(main(["--lang", "en", "--in", GOLDEN, "--out", out,
                 "--coref-model", "missing-model"])).toBe(2);
  });

  it("exits nonzero when validation finds problems", () => {
    const bad = path.join(tmpDir, "bad.ann.jsonl");
    fs.writeFileSync(bad, '{"doc_id":"d","text":"hi","tokens":[{"i":0,"start":0,' +
      '"end":9,"surface":"hi","lemma":"hi","upos":"NOUN","gender":"none",' +
      '"number":"Sing","head":-1,"deprel":"root"}],"coref":[],"sentences":[]}\n');
    expect(main(["validate", "--in", bad])).toBe(1);
  });

  it("exits 2 on missing flags", () => {
    expect(main(["--lang", "en"])).toBe(2);
  });
});
