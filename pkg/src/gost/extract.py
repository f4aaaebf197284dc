"""Occupation mention detection (pipeline stage 1).

Two entry routes produce MentionCandidates: a built-in gazetteer matcher
over inflected occupation forms, and an adapter for externally produced
extractor output (title/surface/description records). External candidates
pass through the fuzzy-match filter before they get a span: a surface that
does not match any token n-gram of the document above the threshold is
dropped as a hallucination.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FormatError
from .graph import Graph, occupation_key
from .textspan import ByteMapper, fold, is_word_char, word_tokens

logger = logging.getLogger(__name__)

DEFAULT_FUZZY_THRESHOLD = 0.8


class MentionSource(str, Enum):
    GAZETTEER = "Gazetteer"
    EXTERNAL = "External"


class GrammaticalNumber(str, Enum):
    SINGULAR = "Singular"
    PLURAL = "Plural"
    UNKNOWN = "Unknown"


class LexicalGender(str, Enum):
    MASC = "Masc"
    FEM = "Fem"
    NONE = "None"


@dataclass(frozen=True)
class MentionCandidate:
    doc_id: str
    title: str
    surface: str
    description: str
    char_span: tuple[int, int] | None  # [start, end) byte offsets; None until verified
    source: MentionSource
    # gazetteer entries resolve these up front; external candidates leave them unset
    occupation_code: str | None = None
    grammatical_number: GrammaticalNumber = GrammaticalNumber.UNKNOWN


@dataclass(frozen=True)
class GazetteerEntry:
    lang: str
    pattern: str  # lowercase-normalized inflected form
    occupation_code: str  # "scheme:code"
    grammatical_number: GrammaticalNumber
    lexical_gender: LexicalGender
    title: str
    description: str


@dataclass(frozen=True)
class CorpusDoc:
    doc_id: str
    lang: str
    text: str


class _Automaton:
    """Plain Aho-Corasick over folded patterns; yields (end_char, pattern_idx)."""

    def __init__(self, patterns: list[str]):
        self._goto: list[dict[str, int]] = [{}]
        self._out: list[list[int]] = [[]]
        self._fail = [0]
        for idx, pattern in enumerate(patterns):
            state = 0
            for ch in pattern:
                nxt = self._goto[state].get(ch)
                if nxt is None:
                    nxt = len(self._goto)
                    self._goto.append({})
                    self._out.append([])
                    self._fail.append(0)
                    self._goto[state][ch] = nxt
                state = nxt
            self._out[state].append(idx)
        queue = deque()
        for state in self._goto[0].values():
            queue.append(state)
        while queue:
            state = queue.popleft()
            for ch, nxt in self._goto[state].items():
                queue.append(nxt)
                fail = self._fail[state]
                while fail and ch not in self._goto[fail]:
                    fail = self._fail[fail]
                self._fail[nxt] = self._goto[fail].get(ch, 0)
                if self._fail[nxt] == nxt:
                    self._fail[nxt] = 0
                self._out[nxt].extend(self._out[self._fail[nxt]])

    def scan(self, text: str):
        state = 0
        for pos, ch in enumerate(text):
            while state and ch not in self._goto[state]:
                state = self._fail[state]
            state = self._goto[state].get(ch, 0)
            for idx in self._out[state]:
                yield pos + 1, idx


class GazetteerMatcher:
    """Immutable multi-pattern matcher for one language."""

    def __init__(self, entries: list[GazetteerEntry]):
        self.entries = list(entries)
        self._automaton = _Automaton([e.pattern for e in self.entries])

    def __len__(self) -> int:
        return len(self.entries)

    def find(self, text: str) -> list[tuple[int, int, GazetteerEntry]]:
        """Word-bounded raw matches as (char_start, char_end, entry)."""
        folded = fold(text)
        hits = []
        for end, idx in self._automaton.scan(folded):
            entry = self.entries[idx]
            start = end - len(entry.pattern)
            if start > 0 and is_word_char(text[start - 1]):
                continue
            if end < len(text) and is_word_char(text[end]):
                continue
            hits.append((start, end, entry))
        return _longest_non_overlapping(hits)


def _longest_non_overlapping(hits):
    chosen: list[tuple[int, int, GazetteerEntry]] = []
    for start, end, entry in sorted(hits, key=lambda h: (-(h[1] - h[0]), h[0])):
        if all(end <= s or start >= e for s, e, _ in chosen):
            chosen.append((start, end, entry))
    chosen.sort(key=lambda h: h[0])
    return chosen


class Gazetteer:
    """Per-language matchers built from lexicon files, resolved against the graph."""

    def __init__(self, matchers: Mapping[str, GazetteerMatcher]):
        self._matchers = dict(matchers)

    @property
    def size(self) -> int:
        return sum(len(m) for m in self._matchers.values())

    @property
    def languages(self) -> set[str]:
        return set(self._matchers)

    def for_lang(self, lang: str) -> GazetteerMatcher | None:
        return self._matchers.get(lang)


def _parse_lexicon_line(line: str, line_no: int, path: Path):
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 5:
        raise FormatError(f"{path}:{line_no}: expected 5 tab-separated columns, got {len(parts)}")
    lang, pattern, code, number_s, gender_s = (p.strip() for p in parts)
    if not pattern:
        raise FormatError(f"{path}:{line_no}: empty pattern")
    try:
        number = GrammaticalNumber(number_s)
        gender = LexicalGender(gender_s)
    except ValueError as e:
        raise FormatError(f"{path}:{line_no}: {e}") from None
    return lang, fold(pattern), code, number, gender


def read_lexicon(path: str | Path) -> list[tuple[str, str, str, GrammaticalNumber, LexicalGender]]:
    """Rows of one lexicon TSV (lang, pattern, code, number, lexical_gender)."""
    path = Path(path)
    rows = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            rows.append(_parse_lexicon_line(line, line_no, path))
    return rows


def build_gazetteer(graph: Graph, lexicon_paths: Iterable[str | Path]) -> Gazetteer:
    """Resolve lexicon rows against the graph; unknown codes are dropped with a warning."""
    per_lang: dict[str, list[GazetteerEntry]] = {}
    for path in lexicon_paths:
        for lang, pattern, code, number, gender in read_lexicon(path):
            key = code if ":" in code else occupation_key("isco08", code)
            node = graph.occupations.get(key)
            if node is None:
                logger.warning("%s: dropping gazetteer entry %r -> unknown code %s",
                               path, pattern, key)
                continue
            per_lang.setdefault(lang, []).append(GazetteerEntry(
                lang=lang, pattern=pattern, occupation_code=key,
                grammatical_number=number, lexical_gender=gender,
                title=node.title, description=node.description))
    return Gazetteer({lang: GazetteerMatcher(entries) for lang, entries in per_lang.items()})


def detect_mentions(doc: CorpusDoc, matcher: GazetteerMatcher) -> list[MentionCandidate]:
    """Case-insensitive, word-bounded gazetteer matches with byte spans."""
    mapper = ByteMapper(doc.text)
    out = []
    for start, end, entry in matcher.find(doc.text):
        out.append(MentionCandidate(
            doc_id=doc.doc_id,
            title=entry.title,
            surface=doc.text[start:end],
            description=entry.description,
            char_span=(mapper.to_byte(start), mapper.to_byte(end)),
            source=MentionSource.GAZETTEER,
            occupation_code=entry.occupation_code,
            grammatical_number=entry.grammatical_number,
        ))
    return out


# -- fuzzy matching --------------------------------------------------------

def levenshtein(a: str, b: str) -> int:
    """Edit distance, iterative two-row DP."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(current[-1] + 1, previous[j] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def similarity(a: str, b: str) -> float:
    """1 - levenshtein/max-length, in [0,1]; two empty strings count as identical."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def verify_surface(candidate: MentionCandidate, text: str,
                   threshold: float = DEFAULT_FUZZY_THRESHOLD) -> tuple[int, int] | None:
    """Best fuzzy span for the candidate surface, or None (hallucination).

    The surface is compared, case-folded, against every token n-gram of the
    text where n is the surface's own token count; the best-scoring span is
    returned iff its score reaches the threshold (ties go leftmost).
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"fuzzy threshold {threshold} outside (0, 1]")
    target_tokens = word_tokens(candidate.surface)
    n = len(target_tokens)
    if n == 0:
        return None
    target = fold(candidate.surface.strip())
    tokens = word_tokens(text)
    best_score, best_span = -1.0, None
    for i in range(len(tokens) - n + 1):
        start, end = tokens[i][0], tokens[i + n - 1][1]
        score = similarity(target, fold(text[start:end]))
        if score > best_score:
            best_score, best_span = score, (start, end)
    if best_span is None or best_score < threshold:
        return None
    mapper = ByteMapper(text)
    return mapper.to_byte(best_span[0]), mapper.to_byte(best_span[1])


# -- external extractor adapter ---------------------------------------------

@dataclass(frozen=True)
class RejectedRecord:
    line: int
    reason: str
    detail: str = ""


def import_external_mentions(path: str | Path, corpus: Mapping[str, CorpusDoc]
                             ) -> tuple[list[MentionCandidate], list[RejectedRecord]]:
    """Read external extractor JSONL ({doc_id, title, surface, description}).

    Candidates come back with char_span unresolved; verify_surface assigns
    spans (or discards). Records for unknown documents or with empty
    surfaces are rejected row-wise; malformed JSON is a FormatError.
    """
    path = Path(path)
    accepted: list[MentionCandidate] = []
    rejected: list[RejectedRecord] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}:{line_no}: bad JSON: {e}") from e
            if not isinstance(record, dict):
                raise FormatError(f"{path}:{line_no}: record is not an object")
            for field_name in ("doc_id", "title", "surface", "description"):
                if not isinstance(record.get(field_name), str):
                    raise FormatError(f"{path}:{line_no}: missing or non-string {field_name!r}")
            if record["doc_id"] not in corpus:
                rejected.append(RejectedRecord(line_no, "UnknownDocument", record["doc_id"]))
                continue
            if not record["surface"].strip():
                rejected.append(RejectedRecord(line_no, "EmptySurface", record["title"]))
                continue
            accepted.append(MentionCandidate(
                doc_id=record["doc_id"],
                title=record["title"],
                surface=record["surface"],
                description=record["description"],
                char_span=None,
                source=MentionSource.EXTERNAL,
            ))
    return accepted, rejected


def load_corpus(path: str | Path) -> dict[str, CorpusDoc]:
    """Read a corpus JSONL ({doc_id, lang, text}) keyed by doc_id."""
    path = Path(path)
    docs: dict[str, CorpusDoc] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}:{line_no}: bad JSON: {e}") from e
            if not isinstance(record, dict):
                raise FormatError(f"{path}:{line_no}: record is not an object")
            for field_name in ("doc_id", "lang", "text"):
                if not isinstance(record.get(field_name), str):
                    raise FormatError(f"{path}:{line_no}: missing or non-string {field_name!r}")
            if record["doc_id"] in docs:
                raise FormatError(f"{path}:{line_no}: duplicate doc_id {record['doc_id']!r}")
            docs[record["doc_id"]] = CorpusDoc(record["doc_id"], record["lang"], record["text"])
    return docs
