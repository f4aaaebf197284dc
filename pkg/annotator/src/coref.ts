/**
 * Rule-based pronoun coreference.
 *
 * Each gendered third-person singular pronoun is linked to the most recent
 * compatible noun (number agreement, subjects preferred) within the current
 * or two preceding sentences. Pairs sharing an antecedent merge into one
 * chain. Greek has no coreference rules here: it degrades to tokens and
 * morphology only, which the consumer's heuristic path covers.
 */

import { ParsedToken } from "./parse";
import { sentenceIndex } from "./tokenize";

const COREF_LANGS = new Set(["en", "fr"]);
const MAX_SENTENCE_DISTANCE = 2;

export function corefModelAvailable(lang: string): boolean {
  return COREF_LANGS.has(lang);
}

export function buildChains(
  tokens: ParsedToken[],
  sentences: Array<[number, number]>,
  lang: string,
): Array<Array<[number, number]>> {
  if (!corefModelAvailable(lang)) return [];
  const chains = new Map<number, number[]>(); // antecedent index -> pronoun indexes

  tokens.forEach((token, i) => {
    if (token.upos !== "PRON" || token.gender === "none" || token.number !== "Sing") return;
    const pronounSentence = sentenceIndex(sentences, token.start);
    let antecedent = -1;
    let antecedentIsSubject = false;
    for (let j = i - 1; j >= 0; j--) {
      const cand = tokens[j];
      if (cand.upos !== "NOUN" || cand.number === "Plur") continue;
      if (pronounSentence - sentenceIndex(sentences, cand.start) > MAX_SENTENCE_DISTANCE) break;
      // skip nouns whose own gender contradicts the pronoun
      if (cand.gender !== "none" && cand.gender !== token.gender) continue;
      const isSubject = cand.deprel === "nsubj";
      if (antecedent === -1 || (isSubject && !antecedentIsSubject)) {
        antecedent = j;
        antecedentIsSubject = isSubject;
      }
      if (antecedentIsSubject) break;
    }
    if (antecedent !== -1) {
      const members = chains.get(antecedent) ?? [];
      members.push(i);
      chains.set(antecedent, members);
    }
  });

  const out: Array<Array<[number, number]>> = [];
  for (const [antecedent, pronouns] of [...chains.entries()].sort((a, b) => a[0] - b[0])) {
    const chain: Array<[number, number]> = [
      [tokens[antecedent].start, tokens[antecedent].end],
    ];
    for (const p of pronouns) chain.push([tokens[p].start, tokens[p].end]);
    out.push(chain);
  }
  return out;
}
