/**
 * Rule-based dependency assignment, one tree per sentence.
 *
 * The copular pattern PRON/NOUN + copula + (article) + NOUN gets the
 * content-word-head analysis (subject and copula attach to the predicate
 * noun); otherwise the first verb of a sentence is the root, preceding
 * nouns/pronouns are subjects and everything unexplained attaches to the
 * root as "dep".
 */

import { TaggedToken } from "./tag";

export interface ParsedToken extends TaggedToken {
  head: number; // document-wide token index or -1
  deprel: string;
}

interface SentenceSlice {
  startToken: number;
  endToken: number; // exclusive
}

function sliceSentences(tokens: TaggedToken[], sentences: Array<[number, number]>): SentenceSlice[] {
  const slices: SentenceSlice[] = [];
  let cursor = 0;
  for (const [, sentenceEnd] of sentences) {
    const startToken = cursor;
    while (cursor < tokens.length && tokens[cursor].end <= sentenceEnd) cursor++;
    slices.push({ startToken, endToken: cursor });
  }
  if (cursor < tokens.length) slices.push({ startToken: cursor, endToken: tokens.length });
  return slices;
}

function parseSentence(tokens: ParsedToken[], from: number, to: number): void {
  if (from >= to) return;
  const window = tokens.slice(from, to);

  // copular pattern: subject + copula + (article) + predicate noun
  for (let k = 0; k + 2 < window.length; k++) {
    const [subj, cop] = [window[k], window[k + 1]];
    if ((subj.upos !== "PRON" && subj.upos !== "NOUN") || cop.upos !== "AUX") continue;
    let predIndex = k + 2;
    if (window[predIndex].upos === "DET" && predIndex + 1 < window.length) predIndex++;
    const pred = window[predIndex];
    if (pred === undefined || pred.upos !== "NOUN") continue;
    const root = from + predIndex;
    tokens[root].head = -1;
    tokens[root].deprel = "root";
    tokens[from + k].head = root;
    tokens[from + k].deprel = "nsubj";
    tokens[from + k + 1].head = root;
    tokens[from + k + 1].deprel = "cop";
    attachRemainder(tokens, from, to, root);
    return;
  }

  let root = -1;
  for (let k = 0; k < window.length; k++) {
    if (window[k].upos === "VERB") {
      root = from + k;
      break;
    }
  }
  if (root === -1) {
    for (let k = 0; k < window.length; k++) {
      if (window[k].upos === "NOUN") {
        root = from + k;
        break;
      }
    }
  }
  if (root === -1) root = from;
  tokens[root].head = -1;
  tokens[root].deprel = "root";
  // one subject per clause: the noun/pronoun closest before the root
  for (let i = root - 1; i >= from; i--) {
    if (tokens[i].deprel) continue;
    if (tokens[i].upos === "NOUN" || tokens[i].upos === "PRON") {
      tokens[i].head = root;
      tokens[i].deprel = "nsubj";
      break;
    }
  }
  attachRemainder(tokens, from, to, root);
}

function attachRemainder(tokens: ParsedToken[], from: number, to: number, root: number): void {
  for (let i = from; i < to; i++) {
    if (tokens[i].deprel) continue;
    const next = nextNoun(tokens, i + 1, to);
    if (tokens[i].upos === "DET" && next !== -1) {
      tokens[i].head = next;
      tokens[i].deprel = "det";
    } else if (tokens[i].upos === "ADP" && next !== -1) {
      tokens[i].head = next;
      tokens[i].deprel = "case";
    } else if (tokens[i].upos === "PUNCT") {
      tokens[i].head = root;
      tokens[i].deprel = "punct";
    } else if (i !== root) {
      tokens[i].head = root;
      tokens[i].deprel = tokens[i].upos === "NOUN" ? "obl" : "dep";
    }
  }
}

function nextNoun(tokens: ParsedToken[], from: number, to: number): number {
  for (let i = from; i < to; i++) {
    if (tokens[i].upos === "NOUN" || tokens[i].upos === "PRON") return i;
  }
  return -1;
}

export function parse(tagged: TaggedToken[], sentences: Array<[number, number]>): ParsedToken[] {
  const tokens: ParsedToken[] = tagged.map((t) => ({ ...t, head: -1, deprel: "" }));
  for (const { startToken, endToken } of sliceSentences(tagged, sentences)) {
    parseSentence(tokens, startToken, endToken);
  }
  for (const token of tokens) {
    if (!token.deprel) {
      token.deprel = "dep";
      token.head = -1;
    }
  }
  return tokens;
}
