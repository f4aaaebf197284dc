/** Standalone validation of an annotation JSONL file. */

import * as fs from "fs";
import { validateRecord } from "./schema";

export interface ValidationReport {
  documents: number;
  problems: string[];
}

export function validateAnnotations(path: string): ValidationReport {
  const problems: string[] = [];
  let documents = 0;
  const seen = new Set<string>();
  const lines = fs.readFileSync(path, "utf8").split("\n");
  lines.forEach((line, index) => {
    if (!line.trim()) return;
    documents++;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch (e) {
      problems.push(`line ${index + 1}: bad JSON: ${(e as Error).message}`);
      return;
    }
    for (const problem of validateRecord(parsed)) {
      problems.push(`line ${index + 1}: ${problem}`);
    }
    const docId = (parsed as { doc_id?: unknown }).doc_id;
    if (typeof docId === "string") {
      if (seen.has(docId)) problems.push(`line ${index + 1}: duplicate doc_id ${docId}`);
      seen.add(docId);
    }
  });
  return { documents, problems };
}
