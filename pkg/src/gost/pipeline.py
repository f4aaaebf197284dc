"""End-to-end corpus analysis: detect -> verify -> link -> identify -> count.

Every per-mention decision is recorded in an audit row so the statistics
written back into the graph can be traced to the exact spans and cascade
cases that produced them.
"""

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import MissingLexicon
from .extract import (
    CorpusDoc,
    Gazetteer,
    MentionCandidate,
    detect_mentions,
    verify_surface,
)
from .genderid import (
    AnnotatedDocument,
    GenderLexicon,
    identify_gender,
    load_gender_lexicon,
)
from .graph import DatasetSource, Graph, StatisticsNode
from .link import EmbeddingStore, LinkedMention, link_mention
from .stats import PartialCounts, ResolvedOccurrence, accumulate, finalize_dataset_stats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuditRow:
    doc_id: str
    span: tuple[int, int]
    code: str
    similarity: float
    label: str
    method: str

    def to_json(self) -> str:
        return json.dumps({
            "doc_id": self.doc_id,
            "span": list(self.span),
            "code": self.code,
            "similarity": round(self.similarity, 6),
            "label": self.label,
            "method": self.method,
        }, ensure_ascii=False, separators=(",", ":"))


@dataclass
class PipelineConfig:
    fuzzy_threshold: float = 0.8
    link_threshold: float = 0.75
    lexical_threshold: float = 0.4
    shards: int = 1


@dataclass
class AnalysisResult:
    counts: PartialCounts
    audit: list[AuditRow]
    attached: list[StatisticsNode]


def _lexicons_for(langs: Iterable[str], lexicon_paths) -> dict[str, GenderLexicon]:
    lexicons = {}
    for lang in sorted(set(langs)):
        lexicons[lang] = load_gender_lexicon(lang, lexicon_paths)
    return lexicons


def analyze_document(doc: CorpusDoc, gazetteer: Gazetteer,
                     lexicon: GenderLexicon, graph: Graph,
                     store: EmbeddingStore | None,
                     annotations: AnnotatedDocument | None,
                     external: Iterable[MentionCandidate] = (),
                     config: PipelineConfig | None = None
                     ) -> tuple[list[ResolvedOccurrence], list[AuditRow]]:
    """Run all three stages over one document."""
    config = config or PipelineConfig()
    matcher = gazetteer.for_lang(doc.lang)
    if matcher is None:
        raise MissingLexicon(f"no gazetteer lexicon for language {doc.lang!r}")

    candidates = detect_mentions(doc, matcher)
    taken_spans = {c.char_span for c in candidates}
    for candidate in external:
        span = verify_surface(candidate, doc.text, config.fuzzy_threshold)
        if span is None:
            logger.info("dropping hallucinated candidate %r in %s", candidate.title, doc.doc_id)
            continue
        if span in taken_spans:
            continue  # gazetteer already produced this exact span
        taken_spans.add(span)
        candidates.append(replace(candidate, char_span=span))
    candidates.sort(key=lambda c: c.char_span)

    linked: list[LinkedMention] = []
    for candidate in candidates:
        mention = link_mention(candidate, graph, store,
                               config.link_threshold, config.lexical_threshold)
        if mention is None:
            logger.info("no occupation above threshold for %r in %s",
                        candidate.title, doc.doc_id)
            continue
        linked.append(mention)

    occurrences: list[ResolvedOccurrence] = []
    audit: list[AuditRow] = []
    for mention in linked:
        resolution = identify_gender(mention, doc.text, lexicon, annotations, neighbors=linked)
        occurrences.append(ResolvedOccurrence(mention.occupation, doc.lang, resolution.label))
        audit.append(AuditRow(
            doc_id=doc.doc_id,
            span=mention.candidate.char_span,
            code=mention.occupation,
            similarity=mention.similarity,
            label=resolution.label.value,
            method=resolution.method.value,
        ))
    return occurrences, audit


def analyze_corpus(graph: Graph, corpus: Mapping[str, CorpusDoc], gazetteer: Gazetteer,
                   dataset: DatasetSource,
                   store: EmbeddingStore | None = None,
                   annotations: Mapping[str, AnnotatedDocument] | None = None,
                   external: Mapping[str, list[MentionCandidate]] | None = None,
                   lexicon_paths=None,
                   config: PipelineConfig | None = None) -> AnalysisResult:
    """Analyze a corpus and attach the resulting dataset statistics.

    With shards > 1 the documents are partitioned round-robin and counted
    per shard before merging; totals are independent of the shard count
    because count merging is associative and commutative. Audit rows keep
    corpus order regardless.
    """
    config = config or PipelineConfig()
    if config.shards < 1:
        raise ValueError(f"shards must be >= 1, got {config.shards}")
    annotations = annotations or {}
    external = external or {}
    docs = list(corpus.values())
    for doc in docs:
        if gazetteer.for_lang(doc.lang) is None:
            raise MissingLexicon(f"no gazetteer lexicon for language {doc.lang!r}")
    lexicons = _lexicons_for((d.lang for d in docs), lexicon_paths)

    shard_results: list[PartialCounts] = []
    audit_by_doc: dict[int, list[AuditRow]] = {}
    for shard_id in range(config.shards):
        occurrences: list[ResolvedOccurrence] = []
        for doc_index in range(shard_id, len(docs), config.shards):
            doc = docs[doc_index]
            doc_occurrences, doc_audit = analyze_document(
                doc, gazetteer, lexicons[doc.lang], graph, store,
                annotations.get(doc.doc_id), external.get(doc.doc_id, ()), config)
            occurrences.extend(doc_occurrences)
            audit_by_doc[doc_index] = doc_audit
        shard_results.append(accumulate(occurrences))

    counts = PartialCounts()
    for partial in shard_results:
        counts = counts.merge(partial)

    audit = [row for _, rows in sorted(audit_by_doc.items()) for row in rows]
    attached = finalize_dataset_stats(counts, dataset, graph)
    return AnalysisResult(counts=counts, audit=audit, attached=attached)


def write_audit(rows: Iterable[AuditRow], path: str | Path) -> None:
    payload = "".join(row.to_json() + "\n" for row in rows)
    Path(path).write_text(payload, encoding="utf-8")
