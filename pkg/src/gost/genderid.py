"""Gender identification for linked occupation mentions (pipeline stage 3).

Three cases run stepwise and the first hit wins:

1. the occupation word itself is gendered (lexicon or morphology annotation);
2. a gendered pronoun is directly linked to the occupation (dependency tree
   when annotations carry one, otherwise copular/appositive surface patterns);
3. coreference (annotated chains when present, otherwise a nearest-pronoun
   heuristic gated by grammatical-number agreement).

If none decide, the mention resolves NotClear and is excluded from
male/female statistics downstream.

Annotations arrive as untrusted JSONL (one document per line, byte-offset
spans); they are schema-validated on load, never assumed well-formed.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormatError
from .extract import GrammaticalNumber, LexicalGender, read_lexicon
from .link import LinkedMention
from .textspan import ByteMapper, fold, word_tokens

logger = logging.getLogger(__name__)

_SENTENCE_RE = re.compile(r"[^.!?;]*[.!?;]?\s*", re.UNICODE)

GENDER_VALUES = ("Masc", "Fem", "none")
NUMBER_VALUES = ("Sing", "Plur", "none")


class ResolutionLabel(str, Enum):
    MALE = "Male"
    FEMALE = "Female"
    NOT_CLEAR = "NotClear"


class ResolutionMethod(str, Enum):
    LEXICAL = "Lexical"
    DIRECT_PRONOUN = "DirectPronoun"
    COREFERENCE = "Coreference"
    UNDETERMINED = "Undetermined"


_LABEL_OF_MORPH = {"Masc": ResolutionLabel.MALE, "Fem": ResolutionLabel.FEMALE}


@dataclass(frozen=True)
class GenderResolution:
    label: ResolutionLabel
    method: ResolutionMethod

    def __post_init__(self):
        if (self.label is ResolutionLabel.NOT_CLEAR) != (self.method is ResolutionMethod.UNDETERMINED):
            raise ValueError(f"label {self.label.value} is inconsistent with method {self.method.value}")


@dataclass(frozen=True)
class Token:
    index: int
    start: int  # byte offsets
    end: int
    surface: str
    lemma: str
    upos: str
    gender: str  # "Masc" | "Fem" | "none"
    number: str  # "Sing" | "Plur" | "none"
    head: int  # token index or -1
    deprel: str


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    text: str
    tokens: tuple[Token, ...]
    coref: tuple[tuple[tuple[int, int], ...], ...]
    sentences: tuple[tuple[int, int], ...]

    @property
    def has_dependencies(self) -> bool:
        return any(t.head >= 0 for t in self.tokens)


# -- gender lexicon ----------------------------------------------------------

@dataclass(frozen=True)
class PronounInfo:
    gender: str | None  # "Masc" | "Fem" | None
    number: str  # "Sing" | "Plur"


@dataclass
class GenderLexicon:
    """Per-language gendered-word knowledge: noun forms and pronoun tables."""

    lang: str
    nouns: dict[str, tuple[str, str | None]] = field(default_factory=dict)  # folded -> (gender, number)
    pronouns: dict[str, PronounInfo] = field(default_factory=dict)
    copulas: frozenset[str] = frozenset()
    articles: frozenset[str] = frozenset()

    def noun_gender(self, folded_surface: str) -> tuple[str, str | None] | None:
        return self.nouns.get(folded_surface)

    def pronoun(self, folded_surface: str) -> PronounInfo | None:
        return self.pronouns.get(folded_surface)


def load_gender_lexicon(lang: str, lexicon_paths: Iterable[str | Path] | None = None,
                        pronoun_table_path: str | Path | None = None) -> GenderLexicon:
    """Assemble the lexicon for one language from the pronoun table JSON and
    the gazetteer TSVs (whose gendered occupation forms double as Case-1 facts)."""
    from .data_files import default_lexicon_paths, pronoun_tables_path

    table_path = Path(pronoun_table_path) if pronoun_table_path else pronoun_tables_path()
    tables = json.loads(table_path.read_text(encoding="utf-8"))
    entry = tables.get(lang)
    if entry is None:
        from .errors import MissingLexicon
        raise MissingLexicon(f"no pronoun table for language {lang!r}")

    pronouns = {fold(form): PronounInfo(info.get("gender"), info["number"])
                for form, info in entry["pronouns"].items()}
    nouns: dict[str, tuple[str, str | None]] = {}
    for form, info in entry.get("nouns", {}).items():
        nouns[fold(form)] = (info["gender"], info.get("number"))

    number_map = {GrammaticalNumber.SINGULAR: "Sing", GrammaticalNumber.PLURAL: "Plur",
                  GrammaticalNumber.UNKNOWN: None}
    for path in (lexicon_paths if lexicon_paths is not None else default_lexicon_paths()):
        for row_lang, pattern, _code, number, gender in read_lexicon(path):
            if row_lang != lang or gender is LexicalGender.NONE:
                continue
            nouns[pattern] = (gender.value, number_map[number])

    return GenderLexicon(
        lang=lang,
        nouns=nouns,
        pronouns=pronouns,
        copulas=frozenset(fold(c) for c in entry.get("copulas", [])),
        articles=frozenset(fold(a) for a in entry.get("articles", [])),
    )


# -- annotation loading / validation -----------------------------------------

def validate_annotation_record(record) -> list[str]:
    """Schema + span-sanity violations for one AnnotatedDocument JSON object."""
    problems: list[str] = []
    if not isinstance(record, dict):
        return ["record is not an object"]
    for name in ("doc_id", "text"):
        if not isinstance(record.get(name), str):
            problems.append(f"missing or non-string {name!r}")
    for name in ("tokens", "coref", "sentences"):
        if not isinstance(record.get(name), list):
            problems.append(f"missing or non-list {name!r}")
    if problems:
        return problems

    text = record["text"]
    mapper = ByteMapper(text)
    limit = mapper.byte_len

    def check_span(span, what) -> tuple[int, int] | None:
        if (not isinstance(span, (list, tuple)) or len(span) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in span)):
            problems.append(f"{what}: span must be [start, end] ints")
            return None
        start, end = span
        if not 0 <= start < end <= limit:
            problems.append(f"{what}: span [{start},{end}) outside text of {limit} bytes")
            return None
        try:
            mapper.to_char(start), mapper.to_char(end)
        except ValueError:
            problems.append(f"{what}: span [{start},{end}) not on character boundaries")
            return None
        return start, end

    previous_end = 0
    count = len(record["tokens"])
    for pos, raw in enumerate(record["tokens"]):
        what = f"token {pos}"
        if not isinstance(raw, dict):
            problems.append(f"{what}: not an object")
            continue
        if raw.get("i") != pos:
            problems.append(f"{what}: field 'i' is {raw.get('i')!r}, expected {pos}")
        for name in ("surface", "lemma", "upos", "deprel"):
            if not isinstance(raw.get(name), str):
                problems.append(f"{what}: missing or non-string {name!r}")
        if raw.get("gender") not in GENDER_VALUES:
            problems.append(f"{what}: gender must be one of {GENDER_VALUES}")
        if raw.get("number") not in NUMBER_VALUES:
            problems.append(f"{what}: number must be one of {NUMBER_VALUES}")
        head = raw.get("head")
        if not isinstance(head, int) or isinstance(head, bool) or head < -1 or head >= count or head == pos:
            problems.append(f"{what}: head {head!r} out of range")
        span = check_span([raw.get("start"), raw.get("end")], what)
        if span is not None:
            start, end = span
            if start < previous_end:
                problems.append(f"{what}: overlaps or precedes previous token")
            previous_end = max(previous_end, end)
            if isinstance(raw.get("surface"), str) and mapper.slice(start, end) != raw["surface"]:
                problems.append(f"{what}: surface {raw['surface']!r} != text slice")
    for ci, chain in enumerate(record["coref"]):
        if not isinstance(chain, list):
            problems.append(f"coref chain {ci}: not a list")
            continue
        for si, span in enumerate(chain):
            check_span(span, f"coref chain {ci} span {si}")
    previous_end = 0
    for si, span in enumerate(record["sentences"]):
        checked = check_span(span, f"sentence {si}")
        if checked is not None:
            if checked[0] < previous_end:
                problems.append(f"sentence {si}: overlaps or precedes previous sentence")
            previous_end = max(previous_end, checked[1])
    return problems


def _record_to_document(record: dict) -> AnnotatedDocument:
    tokens = tuple(Token(index=t["i"], start=t["start"], end=t["end"], surface=t["surface"],
                         lemma=t["lemma"], upos=t["upos"], gender=t["gender"],
                         number=t["number"], head=t["head"], deprel=t["deprel"])
                   for t in record["tokens"])
    coref = tuple(tuple((s, e) for s, e in chain) for chain in record["coref"])
    sentences = tuple((s, e) for s, e in record["sentences"])
    return AnnotatedDocument(record["doc_id"], record["text"], tokens, coref, sentences)


def load_annotations(path: str | Path) -> dict[str, AnnotatedDocument]:
    """Read and validate an annotation JSONL file; any violation is a FormatError."""
    path = Path(path)
    docs: dict[str, AnnotatedDocument] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}:{line_no}: bad JSON: {e}") from e
            problems = validate_annotation_record(record)
            if problems:
                raise FormatError(f"{path}:{line_no}: " + "; ".join(problems[:5]))
            doc = _record_to_document(record)
            if doc.doc_id in docs:
                raise FormatError(f"{path}:{line_no}: duplicate doc_id {doc.doc_id!r}")
            docs[doc.doc_id] = doc
    return docs


# -- shared mention helpers ---------------------------------------------------

def _mention_span(mention: LinkedMention) -> tuple[int, int]:
    span = mention.candidate.char_span
    if span is None:
        raise ValueError("mention has no resolved span; run verify_surface first")
    return span


def _span_tokens(doc: AnnotatedDocument, span: tuple[int, int]) -> list[Token]:
    inside = [t for t in doc.tokens if t.start >= span[0] and t.end <= span[1]]
    if inside:
        return inside
    return [t for t in doc.tokens if t.start < span[1] and t.end > span[0]]


def _head_token(tokens: list[Token]) -> Token | None:
    if not tokens:
        return None
    indexes = {t.index for t in tokens}
    for t in tokens:
        if t.head not in indexes:
            return t
    return tokens[-1]


def _mention_number(mention: LinkedMention, doc: AnnotatedDocument | None) -> str | None:
    """"Sing"/"Plur" when known, None when unknown."""
    if doc is not None:
        tokens = _span_tokens(doc, _mention_span(mention))
        numbers = {t.number for t in tokens if t.number in ("Sing", "Plur")}
        if len(numbers) == 1:
            return numbers.pop()
    return {GrammaticalNumber.SINGULAR: "Sing",
            GrammaticalNumber.PLURAL: "Plur"}.get(mention.candidate.grammatical_number)


@dataclass(frozen=True)
class _HeurToken:
    start: int  # byte offsets
    end: int
    folded: str


def _heuristic_tokens(text: str) -> list[_HeurToken]:
    mapper = ByteMapper(text)
    return [_HeurToken(mapper.to_byte(s), mapper.to_byte(e), fold(surface))
            for s, e, surface in word_tokens(text)]


def _sentence_bounds(text: str, doc: AnnotatedDocument | None) -> list[tuple[int, int]]:
    if doc is not None and doc.sentences:
        return list(doc.sentences)
    mapper = ByteMapper(text)
    bounds = []
    pos = 0
    while pos < len(text):
        match = _SENTENCE_RE.match(text, pos)
        if match is None or match.end() == pos:
            bounds.append((mapper.to_byte(pos), mapper.byte_len))
            break
        bounds.append((mapper.to_byte(pos), mapper.to_byte(match.end())))
        pos = match.end()
    return bounds


def _sentence_index(bounds: list[tuple[int, int]], offset: int) -> int:
    for i, (start, end) in enumerate(bounds):
        if start <= offset < end:
            return i
    return max(0, len(bounds) - 1)


# -- case 1: the word itself -------------------------------------------------

def lexical_gender(mention: LinkedMention, lexicon: GenderLexicon,
                   doc: AnnotatedDocument | None = None) -> ResolutionLabel | None:
    """Gender carried by the occupation surface form itself.

    Morphology annotations take precedence over the lexicon when both agree;
    a disagreement is logged and yields None (conservative fall-through).
    """
    span = _mention_span(mention)
    surface = fold(mention.candidate.surface)

    annotated: str | None = None
    if doc is not None:
        genders = {t.gender for t in _span_tokens(doc, span) if t.gender in ("Masc", "Fem")}
        if len(genders) == 1:
            annotated = genders.pop()
        elif len(genders) > 1:
            logger.debug("mention %r has conflicting token genders", mention.candidate.surface)

    entry = lexicon.noun_gender(surface)
    from_lexicon = entry[0] if entry else None

    if annotated and from_lexicon and annotated != from_lexicon:
        logger.warning("annotation gender %s disagrees with lexicon %s for %r",
                       annotated, from_lexicon, mention.candidate.surface)
        return None
    winner = annotated or from_lexicon
    return _LABEL_OF_MORPH.get(winner) if winner else None


# -- case 2: directly linked pronoun ------------------------------------------

_DIRECT_DEPRELS = {"nsubj", "nsubj:pass", "nsubjpass", "csubj", "cop",
                   "det", "det:poss", "nmod:poss", "poss", "appos"}
_PREDICATE_DEPRELS = {"attr", "acomp", "xcomp", "cop"}


def pronoun_gender(mention: LinkedMention, text: str, lexicon: GenderLexicon,
                   doc: AnnotatedDocument | None = None) -> ResolutionLabel | None:
    """Gender from a pronoun directly linked to the occupation word.

    With a dependency tree: any gendered pronoun one edge away through
    subject/copular/determiner relations (plus the shared-head copular
    pattern). Without one: the surface patterns "PRON is/was (a|an|the) OCC"
    and "PRON, OCC" inside the mention's sentence, singular pronouns only.
    """
    span = _mention_span(mention)
    if doc is not None and doc.has_dependencies:
        tokens = _span_tokens(doc, span)
        occ = _head_token(tokens)
        if occ is None:
            return None
        for t in doc.tokens:
            info = lexicon.pronoun(fold(t.surface))
            if info is None or info.gender is None:
                continue
            if t.head == occ.index and t.deprel in _DIRECT_DEPRELS:
                return _LABEL_OF_MORPH[info.gender]
            if occ.head == t.index and occ.deprel in _DIRECT_DEPRELS:
                return _LABEL_OF_MORPH[info.gender]
            if (t.head == occ.head and t.head >= 0
                    and t.deprel.startswith("nsubj") and occ.deprel in _PREDICATE_DEPRELS):
                return _LABEL_OF_MORPH[info.gender]
        return None
    return _pronoun_gender_heuristic(mention, text, lexicon, doc)


def _pronoun_gender_heuristic(mention: LinkedMention, text: str, lexicon: GenderLexicon,
                              doc: AnnotatedDocument | None) -> ResolutionLabel | None:
    span = _mention_span(mention)
    bounds = _sentence_bounds(text, doc)
    s_start, s_end = bounds[_sentence_index(bounds, span[0])]
    tokens = [t for t in _heuristic_tokens(text) if t.start >= s_start and t.end <= s_end]
    first = next((i for i, t in enumerate(tokens) if t.start >= span[0] and t.end <= span[1]), None)
    if first is None:
        return None

    def gendered_singular(tok: _HeurToken) -> ResolutionLabel | None:
        info = lexicon.pronoun(tok.folded)
        if info is not None and info.gender is not None and info.number == "Sing":
            return _LABEL_OF_MORPH[info.gender]
        return None

    j = first - 1
    if j >= 0 and tokens[j].folded in lexicon.articles:
        j -= 1
    # "PRON is/was (a|an|the) OCC"
    if j >= 1 and tokens[j].folded in lexicon.copulas:
        label = gendered_singular(tokens[j - 1])
        if label is not None:
            return label
    # "PRON, OCC"
    if j >= 0:
        label = gendered_singular(tokens[j])
        gap = _byte_gap(text, tokens[j].end, span[0] if j == first - 1 else tokens[j + 1].start)
        if label is not None and "," in gap:
            return label
    return None


def _byte_gap(text: str, byte_start: int, byte_end: int) -> str:
    if byte_end <= byte_start:
        return ""
    return text.encode("utf-8")[byte_start:byte_end].decode("utf-8", errors="replace")


# -- case 3: coreference -------------------------------------------------------

def coref_gender(mention: LinkedMention, text: str, lexicon: GenderLexicon,
                 doc: AnnotatedDocument | None = None,
                 neighbors: Sequence[LinkedMention] = ()) -> ResolutionLabel | None:
    """Gender through coreference.

    Annotated chains, when present, are authoritative: the chain containing
    the mention decides (conflicting genders inside one chain yield None).
    Without chains, the nearest gendered pronoun after the mention within the
    same or the following sentence decides, provided its grammatical number
    agrees with the mention's and no other linked mention that agrees with
    the pronoun sits in between (ambiguous antecedent).
    """
    span = _mention_span(mention)
    if doc is not None and doc.coref:
        return _coref_from_chains(doc, span, text, lexicon)
    return _coref_heuristic(mention, text, lexicon, doc, neighbors)


def _coref_from_chains(doc: AnnotatedDocument, span: tuple[int, int], text: str,
                       lexicon: GenderLexicon) -> ResolutionLabel | None:
    chain = next((c for c in doc.coref
                  if any(s <= span[0] and span[1] <= e for s, e in c)), None)
    if chain is None:
        return None
    genders: list[str] = []
    for s, e in sorted(chain):
        snippet = _byte_gap(text, s, e)
        for _, _, surface in word_tokens(snippet):
            folded = fold(surface)
            info = lexicon.pronoun(folded)
            if info is not None:
                if info.gender is not None:
                    genders.append(info.gender)
                continue
            entry = lexicon.noun_gender(folded)
            if entry is not None:
                genders.append(entry[0])
    if not genders:
        return None
    if len(set(genders)) > 1:
        logger.debug("conflicting genders in coreference chain at span %s", span)
        return None
    return _LABEL_OF_MORPH[genders[0]]


def _coref_heuristic(mention: LinkedMention, text: str, lexicon: GenderLexicon,
                     doc: AnnotatedDocument | None,
                     neighbors: Sequence[LinkedMention]) -> ResolutionLabel | None:
    span = _mention_span(mention)
    bounds = _sentence_bounds(text, doc)
    sent_i = _sentence_index(bounds, span[0])
    window_end = bounds[min(sent_i + 1, len(bounds) - 1)][1]
    number = _mention_number(mention, doc)

    others = []
    for nb in neighbors:
        nb_span = nb.candidate.char_span
        if nb_span is None or nb_span == span:
            continue
        others.append((nb_span, _mention_number(nb, doc)))

    for tok in _heuristic_tokens(text):
        if tok.start < span[1] or tok.end > window_end:
            continue
        info = lexicon.pronoun(tok.folded)
        if info is None or info.gender is None:
            continue
        if number is not None and info.number != number:
            continue  # number disagreement: this pronoun cannot refer back here
        for nb_span, nb_number in others:
            if span[1] <= nb_span[0] and nb_span[1] <= tok.start:
                if nb_number is None or nb_number == info.number:
                    return None  # ambiguous antecedent in between
        return _LABEL_OF_MORPH[info.gender]
    return None


# -- the cascade ----------------------------------------------------------------

def identify_gender(mention: LinkedMention, text: str, lexicon: GenderLexicon,
                    doc: AnnotatedDocument | None = None,
                    neighbors: Sequence[LinkedMention] = ()) -> GenderResolution:
    """Run the stepwise cascade; the first case that decides wins."""
    label = lexical_gender(mention, lexicon, doc)
    if label is not None:
        return GenderResolution(label, ResolutionMethod.LEXICAL)
    label = pronoun_gender(mention, text, lexicon, doc)
    if label is not None:
        return GenderResolution(label, ResolutionMethod.DIRECT_PRONOUN)
    label = coref_gender(mention, text, lexicon, doc, neighbors)
    if label is not None:
        return GenderResolution(label, ResolutionMethod.COREFERENCE)
    return GenderResolution(ResolutionLabel.NOT_CLEAR, ResolutionMethod.UNDETERMINED)
