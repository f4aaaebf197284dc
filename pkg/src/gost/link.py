"""Linking detected mentions to graph occupations (pipeline stage 2).

The primary route retrieves the occupation whose description embedding is
closest (cosine) to the candidate's description embedding, rejecting
anything under the threshold. Embeddings live in a precomputed JSONL store
keyed by canonical description text; a deterministic lexical fallback
(token Jaccard) covers embedding-free runs and candidates missing from the
store. Gazetteer candidates skip retrieval: their code is lexicon ground
truth.
"""

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateVector, FormatError
from .extract import MentionCandidate
from .graph import Graph

logger = logging.getLogger(__name__)

DEFAULT_EMBEDDING_THRESHOLD = 0.75
DEFAULT_LEXICAL_THRESHOLD = 0.4

_WORD_RE = re.compile(r"\w+", re.UNICODE)

# small multilingual function-word list: enough to keep description Jaccard
# from being dominated by articles/conjunctions (en/fr/el)
STOPWORDS = frozenset("""
a an the and or of in on to for with by as at from into through during
before after other others is are was were be been being have has had do
does did not no nor they them their who whom which that this these those
it its he she his her him
le la les un une des du de et ou dans sur pour par avec au aux ce cette
ces qui que est sont
ο η το οι τα του της των και ή σε με για από που είναι
""".split())


class LinkMethod(str, Enum):
    EMBEDDING = "Embedding"
    LEXICAL = "Lexical"


@dataclass(frozen=True)
class LinkedMention:
    candidate: MentionCandidate
    occupation: str  # "scheme:code"
    similarity: float
    method: LinkMethod


def canonical_key(text: str) -> str:
    """Store lookup key: lowercased, whitespace-collapsed description text."""
    return " ".join(text.lower().split())


class EmbeddingStore:
    """Fixed-dimension float32 vectors keyed by canonical description text."""

    def __init__(self, dim: int):
        if dim <= 0:
            raise ValueError(f"embedding dimension must be positive, got {dim}")
        self.dim = dim
        self._vectors: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, key: str) -> bool:
        return canonical_key(key) in self._vectors

    def add(self, key: str, vector: Sequence[float]) -> None:
        arr = np.asarray(vector, dtype=np.float32)
        if arr.shape != (self.dim,):
            raise FormatError(f"vector for {key!r} has shape {arr.shape}, expected ({self.dim},)")
        self._vectors[canonical_key(key)] = arr

    def get(self, key: str) -> np.ndarray | None:
        return self._vectors.get(canonical_key(key))

    def keys(self) -> list[str]:
        return sorted(self._vectors)

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingStore":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            first = fh.readline()
            try:
                header = json.loads(first) if first.strip() else None
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}: bad header line: {e}") from e
            if not isinstance(header, dict) or not isinstance(header.get("dim"), int):
                raise FormatError(f"{path}: first line must be a {{\"dim\": N}} header")
            store = cls(header["dim"])
            for line_no, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as e:
                    raise FormatError(f"{path}:{line_no}: bad JSON: {e}") from e
                if (not isinstance(record, dict) or not isinstance(record.get("key"), str)
                        or not isinstance(record.get("vector"), list)):
                    raise FormatError(f"{path}:{line_no}: expected {{key, vector}} record")
                if len(record["vector"]) != store.dim:
                    raise FormatError(
                        f"{path}:{line_no}: vector length {len(record['vector'])} != dim {store.dim}")
                store.add(record["key"], record["vector"])
        return store

    def save(self, path: str | Path) -> None:
        # 9 significant decimal digits round-trip float32 exactly
        lines = [f'{{"dim":{self.dim}}}']
        for key in self.keys():
            values = ",".join(format(float(v), ".9g") for v in self._vectors[key])
            lines.append(f'{{"key":{json.dumps(key, ensure_ascii=False)},"vector":[{values}]}}')
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """u.v / (|u||v|), in [-1, 1]."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateVector("cosine undefined for an all-zero vector")
    value = float(np.dot(a, b)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, value))


def _description_tokens(text: str) -> frozenset[str]:
    return frozenset(t for t in (m.group().lower() for m in _WORD_RE.finditer(text))
                     if t not in STOPWORDS)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def _resolved(candidate: MentionCandidate) -> LinkedMention | None:
    if candidate.occupation_code is not None:
        return LinkedMention(candidate, candidate.occupation_code, 1.0, LinkMethod.LEXICAL)
    return None


def link_mention(candidate: MentionCandidate, graph: Graph, store: EmbeddingStore | None,
                 threshold: float = DEFAULT_EMBEDDING_THRESHOLD,
                 lexical_threshold: float = DEFAULT_LEXICAL_THRESHOLD) -> LinkedMention | None:
    """Top-1 embedding retrieval over graph occupation descriptions.

    Returns the best match iff its cosine reaches the threshold, else None
    (the detection is disregarded). Ties break to the smallest occupation
    key. Candidates whose description has no stored vector fall back to
    lexical_link; gazetteer candidates bypass retrieval entirely.
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError(f"link threshold {threshold} outside [-1, 1]")
    already = _resolved(candidate)
    if already is not None:
        return already
    if store is None:
        return lexical_link(candidate, graph, lexical_threshold)
    query = store.get(candidate.description)
    if query is None:
        logger.debug("no vector for candidate %r; using lexical fallback", candidate.title)
        return lexical_link(candidate, graph, lexical_threshold)

    keys, rows = [], []
    for node in graph.iter_occupations():
        if not node.description:
            continue
        vector = store.get(node.description)
        if vector is None:
            logger.debug("occupation %s has no stored vector; skipped", node.key)
            continue
        keys.append(node.key)
        rows.append(vector)
    if not keys:
        return None
    matrix = np.stack(rows).astype(np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    query64 = query.astype(np.float64)
    query_norm = float(np.linalg.norm(query64))
    if query_norm == 0.0 or np.any(norms == 0.0):
        raise DegenerateVector("cosine undefined for an all-zero vector")
    scores = (matrix @ query64) / (norms * query_norm)
    best = int(np.argmax(scores))  # keys are sorted, so first max == smallest key
    best_score = float(scores[best])
    if best_score < threshold:
        return None
    return LinkedMention(candidate, keys[best], best_score, LinkMethod.EMBEDDING)


def link_external_candidates(candidates, graph, store, threshold=DEFAULT_EMBEDDING_THRESHOLD,
                             lexical_threshold=DEFAULT_LEXICAL_THRESHOLD):
    return [m for m in (link_mention(c, graph, store, threshold, lexical_threshold)
                        for c in candidates) if m is not None]


def lexical_link(candidate: MentionCandidate, graph: Graph,
                 threshold: float = DEFAULT_LEXICAL_THRESHOLD) -> LinkedMention | None:
    """Deterministic fallback: stop-word-filtered token Jaccard over descriptions."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"lexical threshold {threshold} outside [0, 1]")
    already = _resolved(candidate)
    if already is not None:
        return already
    query = _description_tokens(candidate.description)
    if not query:
        return None
    best_key, best_score = None, -1.0
    for node in graph.iter_occupations():  # sorted: first strict max == smallest key
        if not node.description:
            continue
        score = jaccard(query, _description_tokens(node.description))
        if score > best_score:
            best_key, best_score = node.key, score
    if best_key is None or best_score < threshold:
        return None
    return LinkedMention(candidate, best_key, best_score, LinkMethod.LEXICAL)


def embedding_keys(graph: Graph) -> list[str]:
    """Every canonical description key a store must cover, each exactly once."""
    keys = {canonical_key(node.description)
            for node in graph.occupations.values() if node.description}
    return sorted(keys)
