/** Part-of-speech and morphology tagging over raw tokens. */

import { Gender, GrammNumber, LanguageLexicon } from "./lexicon";
import { RawToken } from "./tokenize";

export interface TaggedToken extends RawToken {
  lemma: string;
  upos: string;
  gender: Gender;
  number: GrammNumber;
}

const WORD_RE = /^[\p{L}\p{N}_]+$/u;
const DIGIT_RE = /^\p{N}+$/u;

function nounNumber(folded: string, lexicon: LanguageLexicon): GrammNumber {
  for (const suffix of lexicon.pluralSuffixes) {
    if (folded.length > suffix.length + 2 && folded.endsWith(suffix)) {
      return "Plur";
    }
  }
  return "Sing";
}

export function tagTokens(tokens: RawToken[], lexicon: LanguageLexicon): TaggedToken[] {
  return tokens.map((token) => {
    const folded = token.surface.toLowerCase();
    if (!WORD_RE.test(token.surface)) {
      return { ...token, lemma: token.surface, upos: "PUNCT",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    if (DIGIT_RE.test(token.surface)) {
      return { ...token, lemma: folded, upos: "NUM",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    const pronoun = lexicon.pronouns[folded];
    if (pronoun) {
      return { ...token, lemma: folded, upos: "PRON",
               gender: pronoun.gender, number: pronoun.number };
    }
    if (lexicon.copulas.has(folded)) {
      return { ...token, lemma: folded, upos: "AUX",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    if (lexicon.articles.has(folded)) {
      return { ...token, lemma: folded, upos: "DET",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    if (lexicon.prepositions.has(folded)) {
      return { ...token, lemma: folded, upos: "ADP",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    if (lexicon.conjunctions.has(folded)) {
      return { ...token, lemma: folded, upos: "CCONJ",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    if (lexicon.verbs.has(folded)) {
      return { ...token, lemma: folded, upos: "VERB",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    const noun = lexicon.nouns[folded];
    if (noun) {
      return { ...token, lemma: folded, upos: "NOUN",
               gender: noun.gender, number: noun.number };
    }
    if (lexicon.adverbs.has(folded)
        || lexicon.adverbSuffixes.some((suf) => folded.length > suf.length + 2
                                                && folded.endsWith(suf))) {
      return { ...token, lemma: folded, upos: "ADV",
               gender: "none" as Gender, number: "none" as GrammNumber };
    }
    return { ...token, lemma: folded, upos: "NOUN",
             gender: "none" as Gender, number: nounNumber(folded, lexicon) };
  });
}
