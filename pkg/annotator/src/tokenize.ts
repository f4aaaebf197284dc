/** Tokenizer and sentence splitter producing byte-offset spans. */

import { ByteMap } from "./bytes";

export interface RawToken {
  start: number; // byte offsets
  end: number;
  surface: string;
}

const TOKEN_RE = /[\p{L}\p{N}_]+|[^\s\p{L}\p{N}]/gu;
const SENTENCE_END = /[.!?;]/;

export function tokenize(text: string): RawToken[] {
  const map = new ByteMap(text);
  const tokens: RawToken[] = [];
  for (const match of text.matchAll(TOKEN_RE)) {
    const start = match.index ?? 0;
    tokens.push({
      start: map.toByte(start),
      end: map.toByte(start + match[0].length),
      surface: match[0],
    });
  }
  return tokens;
}

/**
 * Sentence spans as byte offsets, covering the whole text without overlap.
 * A sentence ends after terminal punctuation plus any following whitespace.
 */
export function sentenceSpans(text: string): Array<[number, number]> {
  if (text.length === 0) return [];
  const map = new ByteMap(text);
  const spans: Array<[number, number]> = [];
  let start = 0;
  let i = 0;
  while (i < text.length) {
    if (SENTENCE_END.test(text[i])) {
      let end = i + 1;
      while (end < text.length && /\s/.test(text[end])) end++;
      spans.push([map.toByte(start), map.toByte(end)]);
      start = end;
      i = end;
    } else {
      i++;
    }
  }
  if (start < text.length) {
    spans.push([map.toByte(start), map.toByte(text.length)]);
  }
  return spans;
}

/** Index of the sentence containing a byte offset. */
export function sentenceIndex(spans: Array<[number, number]>, offset: number): number {
  for (let i = 0; i < spans.length; i++) {
    if (offset >= spans[i][0] && offset < spans[i][1]) return i;
  }
  return Math.max(0, spans.length - 1);
}
