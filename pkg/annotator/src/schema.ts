/**
 * The annotated-document record schema and its validator.
 *
 * One JSON object per line: {doc_id, text, tokens, coref, sentences} with
 * byte-offset spans. The consumer revalidates on load, so this validator is
 * the contract both sides test against: structural shape first (zod), then
 * span sanity (ordering, ranges, boundary alignment, surface/slice identity).
 */

import { z } from "zod";
import { byteSlice } from "./bytes";

export const GENDER_VALUES = ["Masc", "Fem", "none"] as const;
export const NUMBER_VALUES = ["Sing", "Plur", "none"] as const;

export const TokenSchema = z.object({
  i: z.number().int(),
  start: z.number().int(),
  end: z.number().int(),
  surface: z.string(),
  lemma: z.string(),
  upos: z.string(),
  gender: z.enum(GENDER_VALUES),
  number: z.enum(NUMBER_VALUES),
  head: z.number().int(),
  deprel: z.string(),
});

const Span = z.tuple([z.number().int(), z.number().int()]);

export const DocumentSchema = z.object({
  doc_id: z.string(),
  text: z.string(),
  tokens: z.array(TokenSchema),
  coref: z.array(z.array(Span)),
  sentences: z.array(Span),
});

export type Token = z.infer<typeof TokenSchema>;
export type AnnotatedDocument = z.infer<typeof DocumentSchema>;

export interface CorpusDoc {
  doc_id: string;
  lang: string;
  text: string;
}

export const CorpusDocSchema = z.object({
  doc_id: z.string(),
  lang: z.string(),
  text: z.string(),
});

function isByteBoundary(text: string, offset: number, byteLength: number): boolean {
  if (offset === 0 || offset === byteLength) return true;
  if (offset < 0 || offset > byteLength) return false;
  const byte = Buffer.from(text, "utf8")[offset];
  return (byte & 0xc0) !== 0x80; // not a UTF-8 continuation byte
}

/** All schema/span violations for one parsed record; empty means valid. */
export function validateRecord(record: unknown): string[] {
  const parsed = DocumentSchema.safeParse(record);
  if (!parsed.success) {
    return parsed.error.issues.map(
      (issue) => `${issue.path.join(".") || "(root)"}: ${issue.message}`,
    );
  }
  const doc = parsed.data;
  const problems: string[] = [];
  const byteLength = Buffer.byteLength(doc.text, "utf8");

  const checkSpan = (start: number, end: number, what: string): boolean => {
    if (!(start >= 0 && start < end && end <= byteLength)) {
      problems.push(`${what}: span [${start},${end}) outside text of ${byteLength} bytes`);
      return false;
    }
    if (!isByteBoundary(doc.text, start, byteLength) || !isByteBoundary(doc.text, end, byteLength)) {
      problems.push(`${what}: span [${start},${end}) not on character boundaries`);
      return false;
    }
    return true;
  };

  let previousEnd = 0;
  doc.tokens.forEach((token, pos) => {
    const what = `token ${pos}`;
    if (token.i !== pos) problems.push(`${what}: field 'i' is ${token.i}, expected ${pos}`);
    if (token.head < -1 || token.head >= doc.tokens.length || token.head === pos) {
      problems.push(`${what}: head ${token.head} out of range`);
    }
    if (checkSpan(token.start, token.end, what)) {
      if (token.start < previousEnd) problems.push(`${what}: overlaps or precedes previous token`);
      previousEnd = Math.max(previousEnd, token.end);
      if (byteSlice(doc.text, token.start, token.end) !== token.surface) {
        problems.push(`${what}: surface ${JSON.stringify(token.surface)} != text slice`);
      }
    }
  });

  doc.coref.forEach((chain, ci) =>
    chain.forEach(([s, e], si) => checkSpan(s, e, `coref chain ${ci} span ${si}`)),
  );

  let sentenceEnd = 0;
  doc.sentences.forEach(([s, e], si) => {
    if (checkSpan(s, e, `sentence ${si}`)) {
      if (s < sentenceEnd) problems.push(`sentence ${si}: overlaps or precedes previous sentence`);
      sentenceEnd = Math.max(sentenceEnd, e);
    }
  });
  return problems;
}
