/**
 * The annotation pipeline: corpus JSONL in, annotated-document JSONL out.
 *
 * Every output record is validated against the schema before it is written;
 * a document that fails mid-pipeline is emitted with tokens only (empty
 * coref) and logged, so one bad document never sinks a batch.
 */

import * as fs from "fs";
import { buildChains, corefModelAvailable } from "./coref";
import { lexiconFor } from "./lexicon";
import { parse } from "./parse";
import { AnnotatedDocument, CorpusDoc, CorpusDocSchema, validateRecord } from "./schema";
import { tagTokens } from "./tag";
import { sentenceSpans, tokenize } from "./tokenize";

export interface BridgeConfig {
  language: string;
  pipelineModel?: string;
  corefModel?: string;
  inputPath: string;
  outputPath: string;
}

export const PIPELINE_MODELS = ["rules-v1"];
export const COREF_MODELS = ["rules-v1", "none"];

export function checkModels(config: BridgeConfig): void {
  lexiconFor(config.language);
  const pipeline = config.pipelineModel ?? "rules-v1";
  if (!PIPELINE_MODELS.includes(pipeline)) {
    throw new Error(`pipeline model ${JSON.stringify(pipeline)} is not available; ` +
      `known models: ${PIPELINE_MODELS.join(", ")}`);
  }
  const coref = config.corefModel ?? "rules-v1";
  if (!COREF_MODELS.includes(coref)) {
    throw new Error(`coreference model ${JSON.stringify(coref)} is not available; ` +
      `known models: ${COREF_MODELS.join(", ")}`);
  }
}

export function annotateText(docId: string, text: string, lang: string,
                             corefModel: string = "rules-v1"): AnnotatedDocument {
  const lexicon = lexiconFor(lang);
  const sentences = sentenceSpans(text);
  const tokens = parse(tagTokens(tokenize(text), lexicon), sentences);
  const coref = corefModel === "none" ? [] : buildChains(tokens, sentences, lang);
  return {
    doc_id: docId,
    text,
    tokens: tokens.map((t, i) => ({
      i,
      start: t.start,
      end: t.end,
      surface: t.surface,
      lemma: t.lemma,
      upos: t.upos,
      gender: t.gender,
      number: t.number,
      head: t.head,
      deprel: t.deprel,
    })),
    coref,
    sentences,
  };
}

function tokensOnly(docId: string, text: string, lang: string): AnnotatedDocument {
  const lexicon = lexiconFor(lang);
  const tagged = tagTokens(tokenize(text), lexicon);
  return {
    doc_id: docId,
    text,
    tokens: tagged.map((t, i) => ({
      i, start: t.start, end: t.end, surface: t.surface, lemma: t.lemma,
      upos: t.upos, gender: t.gender, number: t.number, head: -1, deprel: "dep",
    })),
    coref: [],
    sentences: sentenceSpans(text),
  };
}

export function readCorpus(path: string): CorpusDoc[] {
  const docs: CorpusDoc[] = [];
  const lines = fs.readFileSync(path, "utf8").split("\n");
  lines.forEach((line, index) => {
    if (!line.trim()) return;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (e) {
      throw new Error(`${path}:${index + 1}: bad JSON: ${(e as Error).message}`);
    }
    const doc = CorpusDocSchema.safeParse(parsed);
    if (!doc.success) {
      throw new Error(`${path}:${index + 1}: not a corpus record`);
    }
    docs.push(doc.data);
  });
  return docs;
}

export interface AnnotateResult {
  written: number;
  degraded: number; // documents emitted tokens-only after a pipeline failure
}

export function annotateCorpus(config: BridgeConfig): AnnotateResult {
  checkModels(config);
  const docs = readCorpus(config.inputPath);
  const outLines: string[] = [];
  let degraded = 0;
  for (const doc of docs) {
    let record: AnnotatedDocument;
    try {
      record = annotateText(doc.doc_id, doc.text, config.language,
                            config.corefModel ?? "rules-v1");
    } catch (e) {
      process.stderr.write(`warning: ${doc.doc_id}: ${(e as Error).message}; ` +
        `emitting tokens only\n`);
      record = tokensOnly(doc.doc_id, doc.text, config.language);
      degraded++;
    }
    const problems = validateRecord(record);
    if (problems.length > 0) {
      throw new Error(`internal error: produced an invalid record for ` +
        `${doc.doc_id}: ${problems.slice(0, 3).join("; ")}`);
    }
    outLines.push(JSON.stringify(record));
  }
  fs.writeFileSync(config.outputPath, outLines.map((l) => l + "\n").join(""), "utf8");
  return { written: docs.length, degraded };
}
