"""Typed in-memory graph of occupations, gender statistics, and provenance.

Occupations form a digit-prefix hierarchy per classification scheme: the
parent of code "221" is "22", of "22" is "2". Statistics nodes attach a
gender distribution to an occupation, a source (survey or dataset) and a
context node (country for surveys via linkedToCountry, language for
datasets via hasLanguage).

Persistence is line-delimited JSON, one record per line, first line
``{"gost_graph_version":1}``. Percentages are serialized with exactly two
decimal places and records are emitted in canonical order, so saving is a
pure function of graph content.
"""

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterator

from .errors import (
    DuplicateCode,
    FormatError,
    GostError,
    InvalidCode,
    InvalidGraph,
    InvalidStatistics,
    MissingNode,
)

logger = logging.getLogger(__name__)

GRAPH_VERSION = 1
PCT_TOLERANCE = 0.05
_EPS = 1e-9

CODE_RE = re.compile(r"^[0-9]{1,4}$")
SCHEME_RE = re.compile(r"^[a-z][a-z0-9_]*$")
COUNTRY_RE = re.compile(r"^[A-Z]{2}$")
LANG_RE = re.compile(r"^[a-z]{2,3}(-[A-Za-z0-9]+)*$")
PERIOD_RE = re.compile(r"^\d{4}(-\d{4})?$")


class ContextKind(str, Enum):
    COUNTRY = "Country"
    LANGUAGE = "Language"


class Relation(str, Enum):
    LINKED_TO_COUNTRY = "linkedToCountry"
    HAS_LANGUAGE = "hasLanguage"


def occupation_key(scheme: str, code: str) -> str:
    return f"{scheme}:{code}"


def split_key(key: str) -> tuple[str, str]:
    scheme, _, code = key.partition(":")
    if not code:
        return "isco08", scheme
    return scheme, code


@dataclass(frozen=True)
class OccupationNode:
    scheme: str
    code: str
    title: str
    description: str = ""

    @property
    def level(self) -> int:
        return len(self.code)

    @property
    def key(self) -> str:
        return occupation_key(self.scheme, self.code)


@dataclass(frozen=True)
class CountryNode:
    id: str
    kind: ContextKind


@dataclass(frozen=True)
class DatasetSource:
    title: str
    description: str = ""

    kind = "dataset"


@dataclass(frozen=True)
class SurveySource:
    title: str
    description: str = ""
    period: str = ""

    kind = "survey"


@dataclass(frozen=True)
class StatisticsNode:
    occupation: str  # "scheme:code"
    male_pct: float
    female_pct: float
    male_count: int | None = None
    female_count: int | None = None
    unclear_count: int | None = None
    source_kind: str = "survey"  # "survey" | "dataset"
    source_title: str = ""
    context_relation: Relation = Relation.LINKED_TO_COUNTRY
    context_id: str = ""
    year_from: int | None = None
    year_to: int | None = None

    @property
    def identity(self) -> tuple:
        """Dedup key: one statistic per (occupation, source, context, years)."""
        return (self.occupation, self.source_kind, self.source_title,
                self.context_id, self.year_from, self.year_to)


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}({self.subject})" + (f": {self.detail}" if self.detail else "")


def check_statistics(stats: StatisticsNode) -> list[Violation]:
    """Invariant checks for a single statistics node (violations, not errors)."""
    out = []
    subj = stats.occupation
    for name, pct in (("male_pct", stats.male_pct), ("female_pct", stats.female_pct)):
        if not 0.0 <= pct <= 100.0:
            out.append(Violation("BadPercentRange", subj, f"{name}={pct}"))
    if abs(stats.male_pct + stats.female_pct - 100.0) > PCT_TOLERANCE + _EPS:
        out.append(Violation(
            "BadPercentSum", subj,
            f"{stats.male_pct:.2f}+{stats.female_pct:.2f}={stats.male_pct + stats.female_pct:.2f}"))
    counts = (stats.male_count, stats.female_count)
    if any(c is not None for c in counts):
        if any(c is None for c in counts):
            out.append(Violation("BadCounts", subj, "male_count/female_count must come together"))
        elif stats.male_count < 0 or stats.female_count < 0:
            out.append(Violation("BadCounts", subj, "negative count"))
        else:
            total = stats.male_count + stats.female_count
            if total == 0:
                out.append(Violation("BadCountConsistency", subj, "zero male+female total"))
            elif abs(stats.male_pct - 100.0 * stats.male_count / total) > PCT_TOLERANCE + _EPS:
                out.append(Violation(
                    "BadCountConsistency", subj,
                    f"male_pct={stats.male_pct:.2f} but counts give {100.0 * stats.male_count / total:.2f}"))
    if stats.unclear_count is not None and stats.unclear_count < 0:
        out.append(Violation("BadCounts", subj, "negative unclear_count"))
    if stats.source_kind not in ("survey", "dataset"):
        out.append(Violation("BadSourceKind", subj, stats.source_kind))
    expected = Relation.LINKED_TO_COUNTRY if stats.source_kind == "survey" else Relation.HAS_LANGUAGE
    if stats.context_relation != expected:
        out.append(Violation(
            "WrongRelationKind", subj,
            f"{stats.source_kind} statistics must use {expected.value}, got {stats.context_relation.value}"))
    if (stats.year_from is None) != (stats.year_to is None):
        out.append(Violation("BadYears", subj, "year_from/year_to must come together"))
    elif stats.year_from is not None and stats.year_from > stats.year_to:
        out.append(Violation("BadYears", subj, f"{stats.year_from} > {stats.year_to}"))
    return out


class Graph:
    """Single-writer occupation/statistics graph; immutable once finalized."""

    def __init__(self):
        self.occupations: dict[str, OccupationNode] = {}
        self.countries: dict[str, CountryNode] = {}
        self.sources: dict[tuple[str, str], DatasetSource | SurveySource] = {}
        self.statistics: dict[tuple, StatisticsNode] = {}
        self._finalized = False

    # -- construction -------------------------------------------------

    def _check_writable(self):
        if self._finalized:
            raise GostError("graph is finalized and immutable")

    def add_occupation(self, code: str, title: str, description: str = "",
                       scheme: str = "isco08") -> str:
        """Insert one occupation node; subclassOf edges follow from code prefixes.

        Insertion order is free: a node whose parent has not arrived yet is
        simply an orphan until it does, and validate()/finalize() report any
        parent that never arrives.
        """
        self._check_writable()
        if not CODE_RE.match(code):
            raise InvalidCode(f"bad occupation code {code!r}")
        if not SCHEME_RE.match(scheme):
            raise InvalidCode(f"bad classification scheme tag {scheme!r}")
        if not title:
            raise InvalidCode(f"occupation {code!r} has an empty title")
        key = occupation_key(scheme, code)
        if key in self.occupations:
            raise DuplicateCode(f"occupation {key} already exists")
        self.occupations[key] = OccupationNode(scheme, code, title, description)
        return key

    def parent_of(self, code: str, scheme: str = "isco08") -> str | None:
        """Code of the subclassOf parent (the length-1-shorter prefix), if present."""
        if not CODE_RE.match(code):
            raise InvalidCode(f"bad occupation code {code!r}")
        if len(code) == 1:
            return None
        parent = code[:-1]
        return parent if occupation_key(scheme, parent) in self.occupations else None

    def add_context(self, context_id: str, kind: ContextKind) -> CountryNode:
        """Get-or-create the country/language node for a statistics context."""
        self._check_writable()
        pattern = COUNTRY_RE if kind is ContextKind.COUNTRY else LANG_RE
        if not pattern.match(context_id):
            raise InvalidStatistics(f"bad {kind.value.lower()} id {context_id!r}")
        existing = self.countries.get(context_id)
        if existing is not None:
            if existing.kind != kind:
                raise InvalidStatistics(
                    f"context {context_id!r} already registered as {existing.kind.value}")
            return existing
        node = CountryNode(context_id, kind)
        self.countries[context_id] = node
        return node

    def add_source(self, source: DatasetSource | SurveySource) -> DatasetSource | SurveySource:
        """Get-or-create a source node, keyed by (kind, title)."""
        self._check_writable()
        if not source.title:
            raise InvalidStatistics("source title must be non-empty")
        if isinstance(source, SurveySource) and not PERIOD_RE.match(source.period):
            raise InvalidStatistics(f"survey period {source.period!r} is not YYYY or YYYY-YYYY")
        key = (source.kind, source.title)
        existing = self.sources.get(key)
        if existing is not None:
            if existing != source:
                raise InvalidStatistics(f"source {key} already registered with different fields")
            return existing
        self.sources[key] = source
        return source

    def attach_statistics(self, stats: StatisticsNode) -> str:
        """Attach a statistics node; returns the hasStatistics edge id.

        Re-attaching the same identity (occupation, source, context, years)
        replaces the previous node with a warning; national sources publish
        revisions, and re-ingesting a file must stay idempotent.
        """
        self._check_writable()
        if stats.occupation not in self.occupations:
            raise MissingNode(f"unknown occupation {stats.occupation}")
        if (stats.source_kind, stats.source_title) not in self.sources:
            raise MissingNode(f"unknown {stats.source_kind} source {stats.source_title!r}")
        context = self.countries.get(stats.context_id)
        if context is None:
            raise MissingNode(f"unknown context node {stats.context_id!r}")
        problems = check_statistics(stats)
        expected_kind = (ContextKind.COUNTRY if stats.source_kind == "survey"
                         else ContextKind.LANGUAGE)
        if context.kind != expected_kind:
            problems.append(Violation(
                "WrongRelationKind", stats.occupation,
                f"{stats.source_kind} statistics need a {expected_kind.value} context, "
                f"got {context.kind.value} {context.id!r}"))
        if problems:
            raise InvalidStatistics("; ".join(str(p) for p in problems))
        if stats.identity in self.statistics:
            logger.warning("replacing statistics %s (last write wins)", stats.identity)
        self.statistics[stats.identity] = stats
        return "hasStatistics:" + ":".join(str(p) for p in stats.identity)

    def finalize(self) -> None:
        """Validate and freeze; raises InvalidGraph when violations remain."""
        violations = self.validate()
        if violations:
            raise InvalidGraph(violations)
        self._finalized = True

    @property
    def finalized(self) -> bool:
        return self._finalized

    # -- validation ----------------------------------------------------

    def validate(self) -> list[Violation]:
        """Every invariant violation in the graph; empty iff consistent."""
        out: list[Violation] = []
        for key, node in sorted(self.occupations.items()):
            if node.level > 1 and occupation_key(node.scheme, node.code[:-1]) not in self.occupations:
                out.append(Violation("OrphanCode", key, f"missing parent {node.code[:-1]!r}"))
            if not node.title:
                out.append(Violation("EmptyTitle", key))
        for source in self.sources.values():
            if isinstance(source, SurveySource) and not PERIOD_RE.match(source.period):
                out.append(Violation("BadPeriod", source.title, source.period))
        for stats in self._canonical_statistics():
            out.extend(check_statistics(stats))
            if stats.occupation not in self.occupations:
                out.append(Violation("DanglingReference", stats.occupation, "occupation missing"))
            if (stats.source_kind, stats.source_title) not in self.sources:
                out.append(Violation("DanglingReference", stats.occupation,
                                     f"{stats.source_kind} source {stats.source_title!r} missing"))
            context = self.countries.get(stats.context_id)
            if context is None:
                out.append(Violation("DanglingReference", stats.occupation,
                                     f"context {stats.context_id!r} missing"))
            else:
                expected = (ContextKind.COUNTRY if stats.source_kind == "survey"
                            else ContextKind.LANGUAGE)
                if context.kind != expected:
                    out.append(Violation("WrongRelationKind", stats.occupation,
                                         f"context {context.id!r} has kind {context.kind.value}"))
        return out

    # -- queries --------------------------------------------------------

    @property
    def node_count(self) -> int:
        return (len(self.occupations) + len(self.countries)
                + len(self.sources) + len(self.statistics))

    @property
    def edge_count(self) -> int:
        subclass = sum(
            1 for node in self.occupations.values()
            if node.level > 1 and occupation_key(node.scheme, node.code[:-1]) in self.occupations)
        # each statistic carries hasStatistics + source + context edges
        return subclass + 3 * len(self.statistics)

    def get_occupation(self, key: str) -> OccupationNode:
        try:
            return self.occupations[key]
        except KeyError:
            raise MissingNode(f"unknown occupation {key}") from None

    def iter_occupations(self, scheme: str | None = None) -> Iterator[OccupationNode]:
        for key in sorted(self.occupations):
            node = self.occupations[key]
            if scheme is None or node.scheme == scheme:
                yield node

    def dataset_statistics(self, occupation: str, lang: str | None = None) -> list[StatisticsNode]:
        return [s for s in self._canonical_statistics()
                if s.source_kind == "dataset" and s.occupation == occupation
                and (lang is None or s.context_id == lang)]

    def survey_statistics(self, occupation: str, country: str | None = None) -> list[StatisticsNode]:
        return [s for s in self._canonical_statistics()
                if s.source_kind == "survey" and s.occupation == occupation
                and (country is None or s.context_id == country)]

    def _canonical_statistics(self) -> list[StatisticsNode]:
        def sort_key(s: StatisticsNode):
            return (s.occupation, s.source_title, s.year_from if s.year_from is not None else -1,
                    s.context_id, s.year_to if s.year_to is not None else -1)
        return sorted(self.statistics.values(), key=sort_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.occupations == other.occupations
                and self.countries == other.countries
                and self.sources == other.sources
                and self.statistics == other.statistics)


# -- persistence ---------------------------------------------------------

def _fmt_pct(x: float | None) -> str:
    return "null" if x is None else f"{x:.2f}"


def _fmt_opt(x: int | None) -> str:
    return "null" if x is None else str(x)


def _dumps(value) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def _statistics_line(s: StatisticsNode) -> str:
    return (
        '{"kind":"statistics"'
        f',"occupation":{_dumps(s.occupation)}'
        f',"male_pct":{_fmt_pct(s.male_pct)}'
        f',"female_pct":{_fmt_pct(s.female_pct)}'
        f',"male_count":{_fmt_opt(s.male_count)}'
        f',"female_count":{_fmt_opt(s.female_count)}'
        f',"unclear_count":{_fmt_opt(s.unclear_count)}'
        f',"source":{{"kind":{_dumps(s.source_kind)},"title":{_dumps(s.source_title)}}}'
        f',"context":{{"relation":{_dumps(s.context_relation.value)},"id":{_dumps(s.context_id)}}}'
        f',"year_from":{_fmt_opt(s.year_from)}'
        f',"year_to":{_fmt_opt(s.year_to)}'
        "}"
    )


def graph_lines(graph: Graph) -> Iterator[str]:
    """Canonically ordered record lines (without trailing newlines)."""
    yield f'{{"gost_graph_version":{GRAPH_VERSION}}}'
    for node in sorted(graph.occupations.values(), key=lambda n: (n.scheme, n.code)):
        yield _dumps({"kind": "occupation", "scheme": node.scheme, "code": node.code,
                      "title": node.title, "description": node.description})
    for node in sorted(graph.countries.values(), key=lambda n: n.id):
        yield _dumps({"kind": "country", "id": node.id, "role": node.kind.value})
    for (kind, _), source in sorted(graph.sources.items()):
        record = {"kind": kind, "title": source.title, "description": source.description}
        if isinstance(source, SurveySource):
            record["period"] = source.period
        yield _dumps(record)
    for stats in graph._canonical_statistics():
        yield _statistics_line(stats)


def save_graph(graph: Graph, path: str | Path) -> None:
    """Write the graph; deterministic bytes for equal graph content."""
    violations = graph.validate()
    if violations:
        raise InvalidGraph(violations)
    payload = "\n".join(graph_lines(graph)) + "\n"
    Path(path).write_text(payload, encoding="utf-8")


def _require(record: dict, field_name: str, types, line_no: int):
    if field_name not in record:
        raise FormatError(f"line {line_no}: missing field {field_name!r}")
    value = record[field_name]
    if not isinstance(value, types):
        raise FormatError(f"line {line_no}: field {field_name!r} has wrong type")
    return value


def _opt_number(record: dict, field_name: str, line_no: int, kind=int):
    value = record.get(field_name)
    if value is None:
        return None
    if kind is int and isinstance(value, bool):
        raise FormatError(f"line {line_no}: field {field_name!r} has wrong type")
    if not isinstance(value, (int, float) if kind is float else int):
        raise FormatError(f"line {line_no}: field {field_name!r} has wrong type")
    return kind(value)


def load_graph(path: str | Path) -> Graph:
    """Load a graph file; structural problems raise FormatError.

    Semantic invariants (percent sums, orphan codes, relation kinds) are
    deliberately NOT enforced here: validate() reports them, so damaged
    data can be loaded for inspection.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise FormatError(f"{path}: empty file, expected a version header")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: bad header line: {e}") from e
    if not isinstance(header, dict) or header.get("gost_graph_version") != GRAPH_VERSION:
        raise FormatError(f"{path}: missing or unsupported gost_graph_version header")
    if text and not text.endswith("\n"):
        raise FormatError(f"{path}: truncated file (no trailing newline)")

    graph = Graph()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}:{line_no}: bad JSON: {e}") from e
        if not isinstance(record, dict):
            raise FormatError(f"{path}:{line_no}: record is not an object")
        kind = record.get("kind")
        if kind == "occupation":
            scheme = _require(record, "scheme", str, line_no)
            code = _require(record, "code", str, line_no)
            if not CODE_RE.match(code) or not SCHEME_RE.match(scheme):
                raise FormatError(f"{path}:{line_no}: bad occupation key {scheme}:{code}")
            key = occupation_key(scheme, code)
            if key in graph.occupations:
                raise FormatError(f"{path}:{line_no}: duplicate occupation {key}")
            graph.occupations[key] = OccupationNode(
                scheme, code,
                _require(record, "title", str, line_no),
                _require(record, "description", str, line_no))
        elif kind == "country":
            node_id = _require(record, "id", str, line_no)
            role = _require(record, "role", str, line_no)
            try:
                graph.countries[node_id] = CountryNode(node_id, ContextKind(role))
            except ValueError:
                raise FormatError(f"{path}:{line_no}: bad country role {role!r}") from None
        elif kind == "survey":
            source = SurveySource(_require(record, "title", str, line_no),
                                  _require(record, "description", str, line_no),
                                  _require(record, "period", str, line_no))
            graph.sources[(kind, source.title)] = source
        elif kind == "dataset":
            source = DatasetSource(_require(record, "title", str, line_no),
                                   _require(record, "description", str, line_no))
            graph.sources[(kind, source.title)] = source
        elif kind == "statistics":
            source = _require(record, "source", dict, line_no)
            context = _require(record, "context", dict, line_no)
            try:
                relation = Relation(_require(context, "relation", str, line_no))
            except ValueError:
                raise FormatError(f"{path}:{line_no}: bad relation {context.get('relation')!r}") from None
            stats = StatisticsNode(
                occupation=_require(record, "occupation", str, line_no),
                male_pct=float(_require(record, "male_pct", (int, float), line_no)),
                female_pct=float(_require(record, "female_pct", (int, float), line_no)),
                male_count=_opt_number(record, "male_count", line_no),
                female_count=_opt_number(record, "female_count", line_no),
                unclear_count=_opt_number(record, "unclear_count", line_no),
                source_kind=_require(source, "kind", str, line_no),
                source_title=_require(source, "title", str, line_no),
                context_relation=relation,
                context_id=_require(context, "id", str, line_no),
                year_from=_opt_number(record, "year_from", line_no),
                year_to=_opt_number(record, "year_to", line_no),
            )
            if stats.source_kind not in ("survey", "dataset"):
                raise FormatError(f"{path}:{line_no}: bad source kind {stats.source_kind!r}")
            graph.statistics[stats.identity] = stats
        else:
            raise FormatError(f"{path}:{line_no}: unknown record kind {kind!r}")
    return graph


def export_triples(graph: Graph) -> Iterator[str]:
    """One-way triple-per-line export; line count == node_count + edge_count."""
    for node in sorted(graph.occupations.values(), key=lambda n: (n.scheme, n.code)):
        yield f"{node.key}\ta\tOccupation"
        parent = graph.parent_of(node.code, node.scheme)
        if parent is not None:
            yield f"{node.key}\tsubclassOf\t{occupation_key(node.scheme, parent)}"
    for node in sorted(graph.countries.values(), key=lambda n: n.id):
        yield f"country:{node.id}\ta\t{node.kind.value}"
    for (kind, title), _ in sorted(graph.sources.items()):
        yield f"{kind}:{title}\ta\t{kind.capitalize()}"
    for i, stats in enumerate(graph._canonical_statistics()):
        stats_id = f"statistics:{i}"
        yield f"{stats_id}\ta\tStatistics"
        yield f"{stats.occupation}\thasStatistics\t{stats_id}"
        yield f"{stats_id}\thasSource\t{stats.source_kind}:{stats.source_title}"
        yield f"{stats_id}\t{stats.context_relation.value}\tcountry:{stats.context_id}"
