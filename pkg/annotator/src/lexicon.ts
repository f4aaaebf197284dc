/** Per-language closed-class word knowledge for tagging, parsing and coref. */

export type Gender = "Masc" | "Fem" | "none";
export type GrammNumber = "Sing" | "Plur" | "none";

export interface WordInfo {
  gender: Gender;
  number: GrammNumber;
}

export interface LanguageLexicon {
  pronouns: Record<string, WordInfo>;
  copulas: Set<string>;
  articles: Set<string>;
  prepositions: Set<string>;
  conjunctions: Set<string>;
  verbs: Set<string>;
  adverbs: Set<string>;
  adverbSuffixes: string[];
  /** gendered noun forms (occupations and common person nouns) */
  nouns: Record<string, WordInfo>;
  pluralSuffixes: string[];
}

const EN: LanguageLexicon = {
  pronouns: {
    he: { gender: "Masc", number: "Sing" },
    him: { gender: "Masc", number: "Sing" },
    his: { gender: "Masc", number: "Sing" },
    she: { gender: "Fem", number: "Sing" },
    her: { gender: "Fem", number: "Sing" },
    hers: { gender: "Fem", number: "Sing" },
    it: { gender: "none", number: "Sing" },
    its: { gender: "none", number: "Sing" },
    they: { gender: "none", number: "Plur" },
    them: { gender: "none", number: "Plur" },
    their: { gender: "none", number: "Plur" },
    theirs: { gender: "none", number: "Plur" },
    i: { gender: "none", number: "Sing" },
    you: { gender: "none", number: "Sing" },
    we: { gender: "none", number: "Plur" },
    my: { gender: "none", number: "Sing" },
    your: { gender: "none", number: "Sing" },
    our: { gender: "none", number: "Plur" },
  },
  copulas: new Set(["is", "was", "are", "were", "be", "been", "am"]),
  articles: new Set(["a", "an", "the"]),
  prepositions: new Set(["of", "in", "on", "to", "for", "with", "by", "at",
    "from", "about", "into", "before", "after", "over", "under"]),
  conjunctions: new Set(["and", "or", "but", "while", "because", "although"]),
  verbs: new Set(["put", "met", "said", "made", "took", "came", "went", "saw",
    "left", "got", "told", "called", "arrived", "spoke", "brought", "shared",
    "reviewed", "served", "smiled", "moved", "rang", "had", "has", "have"]),
  adverbs: new Set(["today", "tomorrow", "yesterday", "now", "then", "soon",
    "later", "already", "often", "never", "always", "early", "late", "here",
    "there", "overnight", "abroad"]),
  adverbSuffixes: ["ly"],
  nouns: {
    man: { gender: "Masc", number: "Sing" },
    men: { gender: "Masc", number: "Plur" },
    woman: { gender: "Fem", number: "Sing" },
    women: { gender: "Fem", number: "Plur" },
    waiter: { gender: "Masc", number: "Sing" },
    waitress: { gender: "Fem", number: "Sing" },
    husband: { gender: "Masc", number: "Sing" },
    wife: { gender: "Fem", number: "Sing" },
    father: { gender: "Masc", number: "Sing" },
    mother: { gender: "Fem", number: "Sing" },
    boy: { gender: "Masc", number: "Sing" },
    girl: { gender: "Fem", number: "Sing" },
  },
  pluralSuffixes: ["s"],
};

const FR: LanguageLexicon = {
  pronouns: {
    il: { gender: "Masc", number: "Sing" },
    elle: { gender: "Fem", number: "Sing" },
    ils: { gender: "Masc", number: "Plur" },
    elles: { gender: "Fem", number: "Plur" },
    je: { gender: "none", number: "Sing" },
    tu: { gender: "none", number: "Sing" },
    nous: { gender: "none", number: "Plur" },
    vous: { gender: "none", number: "Plur" },
  },
  copulas: new Set(["est", "était", "sont", "étaient", "suis", "es"]),
  articles: new Set(["un", "une", "le", "la", "les", "l", "des", "du"]),
  prepositions: new Set(["de", "à", "en", "dans", "sur", "pour", "par", "avec",
    "chez", "avant", "après"]),
  conjunctions: new Set(["et", "ou", "mais", "car", "donc"]),
  verbs: new Set(["arrivée", "arrivé", "parle", "parlé", "gagné", "perdu",
    "venu", "venue", "vu", "dit", "fait"]),
  adverbs: new Set(["aujourd", "hier", "demain", "déjà", "souvent", "toujours",
    "tard", "tôt", "ici", "là"]),
  adverbSuffixes: ["ment"],
  nouns: {
    homme: { gender: "Masc", number: "Sing" },
    hommes: { gender: "Masc", number: "Plur" },
    femme: { gender: "Fem", number: "Sing" },
    femmes: { gender: "Fem", number: "Plur" },
    infirmier: { gender: "Masc", number: "Sing" },
    infirmière: { gender: "Fem", number: "Sing" },
    infirmiers: { gender: "Masc", number: "Plur" },
    infirmières: { gender: "Fem", number: "Plur" },
    avocat: { gender: "Masc", number: "Sing" },
    avocate: { gender: "Fem", number: "Sing" },
    serveur: { gender: "Masc", number: "Sing" },
    serveuse: { gender: "Fem", number: "Sing" },
    monsieur: { gender: "Masc", number: "Sing" },
    madame: { gender: "Fem", number: "Sing" },
  },
  pluralSuffixes: ["s", "x"],
};

const EL: LanguageLexicon = {
  pronouns: {
    αυτός: { gender: "Masc", number: "Sing" },
    αυτόν: { gender: "Masc", number: "Sing" },
    αυτή: { gender: "Fem", number: "Sing" },
    αυτήν: { gender: "Fem", number: "Sing" },
    αυτοί: { gender: "Masc", number: "Plur" },
    αυτές: { gender: "Fem", number: "Plur" },
    εκείνος: { gender: "Masc", number: "Sing" },
    εκείνη: { gender: "Fem", number: "Sing" },
  },
  copulas: new Set(["είναι", "ήταν", "είμαι", "είσαι"]),
  articles: new Set(["ο", "η", "το", "οι", "τα", "τον", "την", "του", "της",
    "των", "ένας", "μία", "μια", "ένα"]),
  prepositions: new Set(["σε", "με", "για", "από", "προς", "κατά"]),
  conjunctions: new Set(["και", "ή", "αλλά", "όμως"]),
  verbs: new Set(["μίλησε", "ήρθε", "έφυγε", "κέρδισε", "είπε", "έκανε"]),
  adverbs: new Set(["σήμερα", "χθες", "αύριο", "ήδη", "συχνά", "πάντα",
    "αργά", "νωρίς", "εδώ", "εκεί"]),
  adverbSuffixes: [],
  nouns: {
    άνδρας: { gender: "Masc", number: "Sing" },
    άντρας: { gender: "Masc", number: "Sing" },
    γυναίκα: { gender: "Fem", number: "Sing" },
    νοσοκόμος: { gender: "Masc", number: "Sing" },
    νοσοκόμα: { gender: "Fem", number: "Sing" },
    νοσοκόμη: { gender: "Fem", number: "Sing" },
    γιατρός: { gender: "none", number: "Sing" },
    δικηγόρος: { gender: "none", number: "Sing" },
    κύριος: { gender: "Masc", number: "Sing" },
    κυρία: { gender: "Fem", number: "Sing" },
  },
  pluralSuffixes: ["ες", "οι", "ους", "ων"],
};

const LEXICONS: Record<string, LanguageLexicon> = { en: EN, fr: FR, el: EL };

export const SUPPORTED_LANGUAGES = Object.keys(LEXICONS);

export function lexiconFor(lang: string): LanguageLexicon {
  const lexicon = LEXICONS[lang];
  if (!lexicon) {
    throw new Error(`unsupported language ${JSON.stringify(lang)}; supported: ${SUPPORTED_LANGUAGES.join(", ")}`);
  }
  return lexicon;
}
