#!/usr/bin/env node
/**
 * annotate --lang en --in corpus.jsonl --out ann.jsonl [--coref-model ID]
 * annotate validate --in ann.jsonl
 */

import { annotateCorpus } from "./annotate";
import { SUPPORTED_LANGUAGES } from "./lexicon";
import { validateAnnotations } from "./validate";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument ${JSON.stringify(arg)}`);
    }
    const value = argv[i + 1];
    if (value === undefined || value.startsWith("--")) {
      throw new Error(`flag ${arg} needs a value`);
    }
    flags.set(arg.slice(2), value);
    i++;
  }
  return flags;
}

function usage(): string {
  return [
    "usage:",
    "  annotate --lang LANG --in corpus.jsonl --out ann.jsonl" +
      " [--coref-model ID] [--pipeline-model ID]",
    "  annotate validate --in ann.jsonl",
    `languages: ${SUPPORTED_LANGUAGES.join(", ")}`,
  ].join("\n");
}

export function main(argv: string[]): number {
  try {
    if (argv[0] === "validate") {
      const flags = parseFlags(argv.slice(1));
      const input = flags.get("in");
      if (!input) throw new Error("--in is required");
      const report = validateAnnotations(input);
      for (const problem of report.problems) {
        process.stderr.write(problem + "\n");
      }
      process.stdout.write(
        `documents: ${report.documents}\nviolations: ${report.problems.length}\n`);
      return report.problems.length === 0 ? 0 : 1;
    }

    const flags = parseFlags(argv);
    const lang = flags.get("lang");
    const input = flags.get("in");
    const output = flags.get("out");
    if (!lang || !input || !output) {
      process.stderr.write(usage() + "\n");
      return 2;
    }
    const result = annotateCorpus({
      language: lang,
      inputPath: input,
      outputPath: output,
      corefModel: flags.get("coref-model"),
      pipelineModel: flags.get("pipeline-model"),
    });
    process.stdout.write(`documents: ${result.written}\ndegraded: ${result.degraded}\n`);
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
