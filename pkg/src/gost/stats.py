"""Aggregation of gendered mentions into statistics, and the analytical reports.

Counting follows the exclusion rule: NotClear resolutions land in
unclear_count and never touch the male/female percentages. Counts merge by
component-wise addition, so any sharding of a corpus yields identical final
statistics.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .errors import MissingStatistics
from .genderid import ResolutionLabel
from .graph import (
    ContextKind,
    DatasetSource,
    Graph,
    Relation,
    StatisticsNode,
    occupation_key,
)

logger = logging.getLogger(__name__)


@dataclass
class Counts:
    male: int = 0
    female: int = 0
    unclear: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.male + other.male, self.female + other.female,
                      self.unclear + other.unclear)


@dataclass(frozen=True)
class ResolvedOccurrence:
    """One gender-resolved mention occurrence: the unit every count is built from."""
    occupation: str  # "scheme:code"
    lang: str
    label: ResolutionLabel


@dataclass
class PartialCounts:
    by_key: dict[tuple[str, str], Counts] = field(default_factory=dict)

    def add(self, occupation: str, lang: str, label: ResolutionLabel) -> None:
        counts = self.by_key.setdefault((occupation, lang), Counts())
        if label is ResolutionLabel.MALE:
            counts.male += 1
        elif label is ResolutionLabel.FEMALE:
            counts.female += 1
        else:
            counts.unclear += 1

    def merge(self, other: "PartialCounts") -> "PartialCounts":
        merged = PartialCounts({k: Counts(c.male, c.female, c.unclear)
                                for k, c in self.by_key.items()})
        for key, counts in other.by_key.items():
            merged.by_key[key] = merged.by_key.get(key, Counts()) + counts
        return merged

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialCounts):
            return NotImplemented
        return self.by_key == other.by_key


def accumulate(occurrences: Iterable[ResolvedOccurrence]) -> PartialCounts:
    counts = PartialCounts()
    for occ in occurrences:
        counts.add(occ.occupation, occ.lang, occ.label)
    return counts


def finalize_dataset_stats(counts: PartialCounts, dataset: DatasetSource,
                           graph: Graph) -> list[StatisticsNode]:
    """Attach one statistics node per (occupation, lang) with gender evidence.

    Occupations whose counts are all-unclear (male+female == 0) are skipped:
    no node beats a 0/0 percentage. Percentages are recomputed from counts at
    two decimals and contexts use the hasLanguage relation.
    """
    graph.add_source(dataset)
    attached = []
    for (occupation, lang), c in sorted(counts.by_key.items()):
        if c.male + c.female == 0:
            logger.info("skipping %s/%s: no gendered evidence (%d unclear)",
                        occupation, lang, c.unclear)
            continue
        total = c.male + c.female
        graph.add_context(lang, ContextKind.LANGUAGE)
        node = StatisticsNode(
            occupation=occupation,
            male_pct=round(100.0 * c.male / total, 2),
            female_pct=round(100.0 * c.female / total, 2),
            male_count=c.male,
            female_count=c.female,
            unclear_count=c.unclear,
            source_kind="dataset",
            source_title=dataset.title,
            context_relation=Relation.HAS_LANGUAGE,
            context_id=lang,
        )
        graph.attach_statistics(node)
        attached.append(node)
    return attached


@dataclass(frozen=True)
class MisalignmentRow:
    occupation: str
    corpus_male_pct: float
    survey_male_pct: float
    divergence_pp: float
    corpus_source: str
    survey_source: str
    year_from: int | None
    year_to: int | None


def misalignment_report(graph: Graph, occupation: str, lang: str, country: str,
                        year: int | None = None) -> list[MisalignmentRow]:
    """Corpus-vs-survey male percentage divergence in percentage points.

    One row per matching survey statistic (one per year, typically); raises
    MissingStatistics naming the absent side.
    """
    corpus = graph.dataset_statistics(occupation, lang)
    if not corpus:
        raise MissingStatistics("corpus", f"{occupation} for language {lang!r}")
    surveys = graph.survey_statistics(occupation, country)
    if year is not None:
        surveys = [s for s in surveys if s.year_from == year]
    if not surveys:
        raise MissingStatistics("survey", f"{occupation} for country {country!r}"
                                + (f" year {year}" if year is not None else ""))
    rows = []
    for corpus_stat in corpus:
        for survey_stat in surveys:
            rows.append(MisalignmentRow(
                occupation=occupation,
                corpus_male_pct=corpus_stat.male_pct,
                survey_male_pct=survey_stat.male_pct,
                divergence_pp=round(abs(corpus_stat.male_pct - survey_stat.male_pct), 2),
                corpus_source=corpus_stat.source_title,
                survey_source=survey_stat.source_title,
                year_from=survey_stat.year_from,
                year_to=survey_stat.year_to,
            ))
    return rows


def trend(graph: Graph, occupation: str, country: str,
          year_from: int | None = None, year_to: int | None = None
          ) -> list[tuple[int, float, float]]:
    """Survey series (year, male_pct, female_pct) sorted by year; gaps allowed."""
    series = []
    for s in graph.survey_statistics(occupation, country):
        if s.year_from is None:
            continue
        if year_from is not None and s.year_from < year_from:
            continue
        if year_to is not None and s.year_from > year_to:
            continue
        series.append((s.year_from, s.male_pct, s.female_pct))
    series.sort()
    return series


def rollup(graph: Graph, statistics: Iterable[StatisticsNode],
           target_level: int) -> list[StatisticsNode]:
    """Sum count-bearing statistics into their ancestor codes at target_level.

    Percentage-only statistics carry no mass to aggregate and are skipped
    with a warning. Grouping preserves (source, context, years), so parent
    counts are exact column sums of their children's.
    """
    if not 1 <= target_level <= 4:
        raise ValueError(f"target level {target_level} outside 1..4")
    groups: dict[tuple, Counts] = {}
    meta: dict[tuple, StatisticsNode] = {}
    for s in statistics:
        if s.male_count is None or s.female_count is None:
            logger.warning("skipping percentage-only statistics for %s (%s): no counts to roll up",
                           s.occupation, s.source_title)
            continue
        scheme, code = s.occupation.split(":", 1)
        if len(code) < target_level:
            logger.warning("skipping %s: already above level %d", s.occupation, target_level)
            continue
        ancestor = occupation_key(scheme, code[:target_level])
        key = (ancestor, s.source_kind, s.source_title, s.context_relation,
               s.context_id, s.year_from, s.year_to)
        bucket = groups.setdefault(key, Counts())
        bucket.male += s.male_count
        bucket.female += s.female_count
        bucket.unclear += s.unclear_count or 0
        meta[key] = s
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(p) for p in k)):
        ancestor, source_kind, source_title, relation, context_id, y0, y1 = key
        c = groups[key]
        total = c.male + c.female
        if total == 0:
            continue
        out.append(StatisticsNode(
            occupation=ancestor,
            male_pct=round(100.0 * c.male / total, 2),
            female_pct=round(100.0 * c.female / total, 2),
            male_count=c.male,
            female_count=c.female,
            unclear_count=c.unclear,
            source_kind=source_kind,
            source_title=source_title,
            context_relation=relation,
            context_id=context_id,
            year_from=y0,
            year_to=y1,
        ))
    return out
