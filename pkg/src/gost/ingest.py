"""CSV ingestion: classification files and labour-survey gender distributions.

Both readers use plain comma-separated UTF-8 with a required header row,
double-quote escaping and decimal points (no locale commas). Survey
metadata travels as a small JSON file {title, description, period}.
"""

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError
from .graph import (
    COUNTRY_RE,
    PERIOD_RE,
    ContextKind,
    Graph,
    Relation,
    StatisticsNode,
    SurveySource,
    occupation_key,
)

logger = logging.getLogger(__name__)

CLASSIFICATION_HEADER = ["code", "title", "description"]
SURVEY_HEADER = ["country", "year", "scheme", "code", "male_pct", "female_pct"]
SURVEY_COUNT_COLUMNS = ["male_count", "female_count"]

YEAR_MIN, YEAR_MAX = 1900, 2100
MAX_BAD_ROW_RATIO = 0.10


@dataclass(frozen=True)
class ClassificationRow:
    scheme: str
    code: str
    title: str
    description: str


@dataclass(frozen=True)
class SurveyRow:
    country: str
    year: int
    scheme: str
    code: str
    male_pct: float
    female_pct: float
    male_count: int | None = None
    female_count: int | None = None


@dataclass(frozen=True)
class RowError:
    line: int
    reason: str
    detail: str = ""


@dataclass
class IngestReport:
    added: int
    rejected: list[RowError]

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)


def _open_rows(path: Path, expected_header: list[str], optional: list[str] | None = None):
    with path.open(encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected header row") from None
        header = [h.strip() for h in header]
        if header == expected_header:
            has_optional = False
        elif optional and header == expected_header + optional:
            has_optional = True
        else:
            raise FormatError(f"{path}: bad header {header!r}, expected {expected_header!r}")
        rows = [(line_no, row) for line_no, row in enumerate(reader, start=2) if row]
    return rows, has_optional


def load_classification(graph: Graph, path: str | Path, scheme: str = "isco08") -> IngestReport:
    """Load one classification CSV (code,title,description) into the graph.

    Malformed rows are collected and skipped; more than 10% bad rows aborts
    with FormatError before touching the graph.
    """
    path = Path(path)
    rows, _ = _open_rows(path, CLASSIFICATION_HEADER)

    parsed: list[tuple[int, ClassificationRow]] = []
    errors: list[RowError] = []
    seen: set[str] = set()
    for line_no, row in rows:
        if len(row) != 3:
            errors.append(RowError(line_no, "MalformedRow", f"expected 3 fields, got {len(row)}"))
            continue
        code, title, description = (cell.strip() for cell in row)
        record = ClassificationRow(scheme, code, title, description)
        if not code.isdigit() or not 1 <= len(code) <= 4:
            errors.append(RowError(line_no, "InvalidCode", code))
            continue
        if not title:
            errors.append(RowError(line_no, "EmptyTitle", code))
            continue
        key = occupation_key(scheme, code)
        if key in seen or key in graph.occupations:
            errors.append(RowError(line_no, "DuplicateCode", key))
            continue
        seen.add(key)
        parsed.append((line_no, record))

    total = len(rows)
    if total and len(errors) / total > MAX_BAD_ROW_RATIO:
        raise FormatError(f"{path}: {len(errors)}/{total} bad rows exceeds the 10% limit")

    for _, record in parsed:
        graph.add_occupation(record.code, record.title, record.description, scheme=record.scheme)
    for err in errors:
        logger.warning("%s:%d skipped row: %s %s", path, err.line, err.reason, err.detail)
    return IngestReport(added=len(parsed), rejected=errors)


def load_survey_meta(path: str | Path) -> SurveySource:
    """Read the survey description JSON ({title, description, period})."""
    path = Path(path)
    try:
        record = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: bad JSON: {e}") from e
    if not isinstance(record, dict):
        raise FormatError(f"{path}: survey meta must be a JSON object")
    for field_name in ("title", "description", "period"):
        if not isinstance(record.get(field_name), str):
            raise FormatError(f"{path}: missing or non-string field {field_name!r}")
    source = SurveySource(record["title"], record["description"], record["period"])
    if not source.title:
        raise FormatError(f"{path}: survey title must be non-empty")
    if not PERIOD_RE.match(source.period):
        raise FormatError(f"{path}: period {source.period!r} is not YYYY or YYYY-YYYY")
    return source


def _parse_survey_row(line_no: int, row: list[str], has_counts: bool) -> SurveyRow | RowError:
    width = len(SURVEY_HEADER) + (len(SURVEY_COUNT_COLUMNS) if has_counts else 0)
    if len(row) != width:
        return RowError(line_no, "MalformedRow", f"expected {width} fields, got {len(row)}")
    cells = [cell.strip() for cell in row]
    country, year_s, scheme, code = cells[:4]
    if not COUNTRY_RE.match(country):
        return RowError(line_no, "MalformedRow", f"bad country {country!r}")
    try:
        year = int(year_s)
        male_pct = round(float(cells[4]), 2)
        female_pct = round(float(cells[5]), 2)
    except ValueError:
        return RowError(line_no, "MalformedRow", "non-numeric year or percentage")
    if not YEAR_MIN <= year <= YEAR_MAX:
        return RowError(line_no, "BadYear", year_s)
    male_count = female_count = None
    if has_counts and (cells[6] or cells[7]):
        try:
            male_count, female_count = int(cells[6]), int(cells[7])
        except ValueError:
            return RowError(line_no, "MalformedRow", "non-integer count")
        if male_count < 0 or female_count < 0:
            return RowError(line_no, "MalformedRow", "negative count")
    return SurveyRow(country, year, scheme, code, male_pct, female_pct,
                     male_count, female_count)


def load_survey(graph: Graph, path: str | Path, meta: SurveySource) -> IngestReport:
    """Attach one survey CSV as statistics nodes with linkedToCountry context.

    Percentages are rounded to two decimals on entry (the serialization
    precision), which keeps save/load a strict round trip. Rows referencing
    unknown occupations or violating the percent-sum rule are rejected
    individually; re-loading the same file is idempotent.
    """
    path = Path(path)
    rows, has_counts = _open_rows(path, SURVEY_HEADER, SURVEY_COUNT_COLUMNS)
    graph.add_source(meta)

    attached = 0
    rejected: list[RowError] = []
    for line_no, raw in rows:
        row = _parse_survey_row(line_no, raw, has_counts)
        if isinstance(row, RowError):
            rejected.append(row)
            continue
        key = occupation_key(row.scheme, row.code)
        if key not in graph.occupations:
            rejected.append(RowError(line_no, "UnknownOccupation", key))
            continue
        if abs(row.male_pct + row.female_pct - 100.0) > 0.05 + 1e-9:
            rejected.append(RowError(
                line_no, "BadPercentSum", f"{row.male_pct:.2f}+{row.female_pct:.2f}"))
            continue
        if row.male_count is not None:
            total = row.male_count + row.female_count
            if total == 0 or abs(row.male_pct - 100.0 * row.male_count / total) > 0.05 + 1e-9:
                rejected.append(RowError(line_no, "BadCountConsistency", key))
                continue
        graph.add_context(row.country, ContextKind.COUNTRY)
        graph.attach_statistics(StatisticsNode(
            occupation=key,
            male_pct=row.male_pct,
            female_pct=row.female_pct,
            male_count=row.male_count,
            female_count=row.female_count,
            source_kind="survey",
            source_title=meta.title,
            context_relation=Relation.LINKED_TO_COUNTRY,
            context_id=row.country,
            year_from=row.year,
            year_to=row.year,
        ))
        attached += 1
    for err in rejected:
        logger.warning("%s:%d rejected row: %s %s", path, err.line, err.reason, err.detail)
    return IngestReport(added=attached, rejected=rejected)
