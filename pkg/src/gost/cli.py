"""Command-line entry point.

Command grammar:

    gost build-kg | ingest-survey | analyze
         | report {misalignment|trend|rollup}
         | validate | list-embedding-keys | export-triples

Exit codes: 0 success, 1 domain/validation failure, 2 environment/format
failure. Every command is deterministic for identical inputs and flags.
An optional --config JSON mirrors every flag (explicit flags win), and the
GOST_KG environment variable supplies the default graph path.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .data_files import default_lexicon_paths
from .errors import FormatError, GostError, InvalidGraph
from .extract import build_gazetteer, import_external_mentions, load_corpus
from .genderid import load_annotations
from .graph import (
    DatasetSource,
    Graph,
    export_triples,
    load_graph,
    occupation_key,
    save_graph,
)
from .ingest import load_classification, load_survey, load_survey_meta
from .link import EmbeddingStore, embedding_keys
from .pipeline import PipelineConfig, analyze_corpus, write_audit
from .stats import misalignment_report, rollup, trend

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_ENVIRONMENT = 2


def _fmt2(x: float) -> str:
    return f"{x:.2f}"


def _load_kg(args) -> Graph:
    kg = args.get("kg") or os.environ.get("GOST_KG")
    if not kg:
        raise FormatError("no graph path: pass --kg or set GOST_KG")
    return load_graph(kg)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_build_kg(args: dict) -> int:
    graph = Graph()
    classifications: list[tuple[str, str]] = []
    if args.get("isco"):
        classifications.append(("isco08", args["isco"]))
    for entry in args.get("classification") or []:
        scheme, _, path = entry.partition("=")
        if not path:
            raise FormatError(f"--classification needs SCHEME=PATH, got {entry!r}")
        classifications.append((scheme, path))
    if not classifications:
        raise FormatError("nothing to load: pass --isco and/or --classification")
    if not args.get("out"):
        raise FormatError("--out is required")
    added = 0
    for scheme, path in classifications:
        report = load_classification(graph, path, scheme)
        added += report.added
    violations = graph.validate()
    if violations:
        for v in violations:
            print(str(v), file=sys.stderr)
        return EXIT_DOMAIN
    save_graph(graph, args["out"])
    print(f"occupations: {added}")
    print(f"nodes: {graph.node_count}")
    print(f"edges: {graph.edge_count}")
    return EXIT_OK


def cmd_ingest_survey(args: dict) -> int:
    for name in ("survey", "meta"):
        if not args.get(name):
            raise FormatError(f"--{name} is required")
    graph = _load_kg(args)
    meta = load_survey_meta(args["meta"])
    report = load_survey(graph, args["survey"], meta)
    print(f"accepted: {report.added}")
    print(f"rejected: {report.rejected_count}")
    for err in report.rejected:
        print(f"  line {err.line}: {err.reason} {err.detail}", file=sys.stderr)
    out = args.get("out") or args.get("kg") or os.environ.get("GOST_KG")
    if report.added > 0:
        save_graph(graph, out)
    return EXIT_OK if report.added > 0 or not report.rejected else EXIT_DOMAIN


def cmd_analyze(args: dict) -> int:
    for name in ("corpus", "out", "dataset_title"):
        if not args.get(name):
            raise FormatError(f"--{name.replace('_', '-')} is required")
    graph = _load_kg(args)
    corpus = load_corpus(args["corpus"])
    lexicon_paths = args.get("lexicon") or default_lexicon_paths()
    gazetteer = build_gazetteer(graph, lexicon_paths)
    annotations = load_annotations(args["annotations"]) if args.get("annotations") else None
    store = EmbeddingStore.load(args["embeddings"]) if args.get("embeddings") else None

    external = None
    if args.get("external_mentions"):
        accepted, rejected = import_external_mentions(args["external_mentions"], corpus)
        for record in rejected:
            logger.warning("external mentions line %d rejected: %s %s",
                           record.line, record.reason, record.detail)
        external = {}
        for candidate in accepted:
            external.setdefault(candidate.doc_id, []).append(candidate)

    dataset = DatasetSource(args["dataset_title"], args.get("dataset_description") or "")
    config = PipelineConfig(
        fuzzy_threshold=args.get("fuzzy_threshold", 0.8),
        link_threshold=args.get("link_threshold", 0.75),
        lexical_threshold=args.get("lexical_threshold", 0.4),
        shards=args.get("shards", 1),
    )
    result = analyze_corpus(graph, corpus, gazetteer, dataset, store=store,
                            annotations=annotations, external=external,
                            lexicon_paths=lexicon_paths, config=config)
    save_graph(graph, args["out"])
    audit_path = args.get("audit") or (args["out"] + ".audit.jsonl")
    write_audit(result.audit, audit_path)
    print(f"documents: {len(corpus)}")
    print(f"mentions: {len(result.audit)}")
    print(f"statistics: {len(result.attached)}")
    return EXIT_OK


def _resolve_code(graph: Graph, raw: str) -> str:
    key = raw if ":" in raw else occupation_key("isco08", raw)
    graph.get_occupation(key)  # raises MissingNode -> exit 1
    return key


def cmd_report_misalignment(args: dict) -> int:
    for name in ("code", "lang", "country"):
        if not args.get(name):
            raise FormatError(f"--{name} is required")
    graph = _load_kg(args)
    key = _resolve_code(graph, args["code"])
    rows = misalignment_report(graph, key, args["lang"], args["country"], args.get("year"))
    if args.get("format", "json") == "table":
        lines = [f"{'occupation':<14} {'corpus_m%':>9} {'survey_m%':>9} {'divergence':>10} "
                 f"{'years':>9}  corpus_source / survey_source"]
        for r in rows:
            lines.append(f"{r.occupation:<14} {_fmt2(r.corpus_male_pct):>9} "
                         f"{_fmt2(r.survey_male_pct):>9} {_fmt2(r.divergence_pp):>10} "
                         f"{str(r.year_from):>9}  {r.corpus_source} / {r.survey_source}")
        _write_or_print("\n".join(lines) + "\n", args.get("out"))
        return EXIT_OK
    row_objs = []
    for r in rows:
        row_objs.append(
            '{"occupation":%s,"corpus_male_pct":%s,"survey_male_pct":%s,"divergence_pp":%s,'
            '"corpus_source":%s,"survey_source":%s,"year_from":%s,"year_to":%s}' % (
                json.dumps(r.occupation), _fmt2(r.corpus_male_pct), _fmt2(r.survey_male_pct),
                _fmt2(r.divergence_pp), json.dumps(r.corpus_source, ensure_ascii=False),
                json.dumps(r.survey_source, ensure_ascii=False),
                "null" if r.year_from is None else r.year_from,
                "null" if r.year_to is None else r.year_to))
    query = json.dumps({"report": "misalignment", "occupation": key, "lang": args["lang"],
                        "country": args["country"], "year": args.get("year")},
                       ensure_ascii=False, separators=(",", ":"))
    _write_or_print('{"query":%s,"rows":[%s]}\n' % (query, ",".join(row_objs)),
                    args.get("out"))
    return EXIT_OK


def cmd_report_trend(args: dict) -> int:
    for name in ("code", "country"):
        if not args.get(name):
            raise FormatError(f"--{name} is required")
    graph = _load_kg(args)
    key = _resolve_code(graph, args["code"])
    series = trend(graph, key, args["country"], args.get("year_from"), args.get("year_to"))
    if args.get("format", "csv") == "json":
        rows = ",".join('{"year":%d,"male_pct":%s,"female_pct":%s}'
                        % (y, _fmt2(m), _fmt2(f)) for y, m, f in series)
        query = json.dumps({"report": "trend", "occupation": key, "country": args["country"]},
                           separators=(",", ":"))
        _write_or_print('{"query":%s,"rows":[%s]}\n' % (query, rows), args.get("out"))
    else:
        lines = ["year,male_pct,female_pct"]
        lines += [f"{y},{_fmt2(m)},{_fmt2(f)}" for y, m, f in series]
        _write_or_print("\n".join(lines) + "\n", args.get("out"))
    return EXIT_OK


def cmd_report_rollup(args: dict) -> int:
    if not args.get("level"):
        raise FormatError("--level is required")
    graph = _load_kg(args)
    nodes = rollup(graph, graph.statistics.values(), args["level"])
    if args.get("format", "json") == "table":
        lines = [f"{'occupation':<14} {'male%':>7} {'female%':>8} {'m':>7} {'f':>7} {'u':>7}  source"]
        for n in nodes:
            lines.append(f"{n.occupation:<14} {_fmt2(n.male_pct):>7} {_fmt2(n.female_pct):>8} "
                         f"{n.male_count:>7} {n.female_count:>7} {n.unclear_count or 0:>7}  "
                         f"{n.source_title} ({n.context_id})")
        _write_or_print("\n".join(lines) + "\n", args.get("out"))
        return EXIT_OK
    rows = []
    for n in nodes:
        rows.append('{"occupation":%s,"male_pct":%s,"female_pct":%s,"male_count":%d,'
                    '"female_count":%d,"unclear_count":%d,"source":%s,"context":%s}' % (
                        json.dumps(n.occupation), _fmt2(n.male_pct), _fmt2(n.female_pct),
                        n.male_count, n.female_count, n.unclear_count or 0,
                        json.dumps(n.source_title, ensure_ascii=False),
                        json.dumps(n.context_id)))
    query = json.dumps({"report": "rollup", "level": args["level"]}, separators=(",", ":"))
    _write_or_print('{"query":%s,"rows":[%s]}\n' % (query, ",".join(rows)), args.get("out"))
    return EXIT_OK


def cmd_validate(args: dict) -> int:
    graph = _load_kg(args)
    violations = graph.validate()
    for v in violations:
        print(str(v))
    print(f"violations: {len(violations)}")
    return EXIT_DOMAIN if violations else EXIT_OK


def cmd_list_embedding_keys(args: dict) -> int:
    graph = _load_kg(args)
    text = "".join(key + "\n" for key in embedding_keys(graph))
    _write_or_print(text, args.get("out"))
    return EXIT_OK


def cmd_export_triples(args: dict) -> int:
    graph = _load_kg(args)
    text = "".join(line + "\n" for line in export_triples(graph))
    _write_or_print(text, args.get("out"))
    return EXIT_OK


# -- parser / config merge -------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gost", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, configure):
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file mirroring the flags; flags win")
        p.add_argument("--verbose", action="store_true")
        configure(p)
        p.set_defaults(_func=func)
        return p

    def kg_flag(p):
        p.add_argument("--kg", help="graph file (default: $GOST_KG)")

    def p_build(p):
        p.add_argument("--isco", help="ISCO-08 classification CSV")
        p.add_argument("--classification", action="append", metavar="SCHEME=PATH")
        p.add_argument("--out", help="output graph path")
    add("build-kg", cmd_build_kg, p_build)

    def p_ingest(p):
        kg_flag(p)
        p.add_argument("--survey", help="survey CSV")
        p.add_argument("--meta", help="survey metadata JSON {title, description, period}")
        p.add_argument("--out", help="output graph path (default: in place)")
    add("ingest-survey", cmd_ingest_survey, p_ingest)

    def p_analyze(p):
        kg_flag(p)
        p.add_argument("--corpus", help="corpus JSONL {doc_id, lang, text}")
        p.add_argument("--annotations", help="annotation JSONL (optional)")
        p.add_argument("--external-mentions", dest="external_mentions",
                       help="external extractor JSONL (optional)")
        p.add_argument("--embeddings", help="embedding store JSONL (optional)")
        p.add_argument("--lexicon", action="append", help="gazetteer TSV (repeatable)")
        p.add_argument("--fuzzy-threshold", dest="fuzzy_threshold", type=float)
        p.add_argument("--link-threshold", dest="link_threshold", type=float)
        p.add_argument("--lexical-threshold", dest="lexical_threshold", type=float)
        p.add_argument("--shards", type=int)
        p.add_argument("--dataset-title", dest="dataset_title")
        p.add_argument("--dataset-description", dest="dataset_description")
        p.add_argument("--out", help="updated graph path")
        p.add_argument("--audit", help="audit JSONL path (default: OUT.audit.jsonl)")
    add("analyze", cmd_analyze, p_analyze)

    report = sub.add_parser("report")
    report_sub = report.add_subparsers(dest="report_kind", required=True)

    def add_report(name, func, configure):
        p = report_sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config")
        p.add_argument("--verbose", action="store_true")
        kg_flag(p)
        p.add_argument("--out", help="output path (default: stdout)")
        configure(p)
        p.set_defaults(_func=func)

    def p_mis(p):
        p.add_argument("--code")
        p.add_argument("--lang")
        p.add_argument("--country")
        p.add_argument("--year", type=int)
        p.add_argument("--format", choices=["json", "table"])
    add_report("misalignment", cmd_report_misalignment, p_mis)

    def p_trend(p):
        p.add_argument("--code")
        p.add_argument("--country")
        p.add_argument("--from", dest="year_from", type=int)
        p.add_argument("--to", dest="year_to", type=int)
        p.add_argument("--format", choices=["csv", "json"])
    add_report("trend", cmd_report_trend, p_trend)

    def p_rollup(p):
        p.add_argument("--level", type=int)
        p.add_argument("--format", choices=["json", "table"])
    add_report("rollup", cmd_report_rollup, p_rollup)

    add("validate", cmd_validate, kg_flag)

    def p_keys(p):
        kg_flag(p)
        p.add_argument("--out")
    add("list-embedding-keys", cmd_list_embedding_keys, p_keys)

    def p_triples(p):
        kg_flag(p)
        p.add_argument("--out")
    add("export-triples", cmd_export_triples, p_triples)

    return parser


def _merge_config(values: dict) -> dict:
    """Overlay --config file values under explicitly passed flags."""
    config_path = values.get("config")
    if not config_path:
        return values
    try:
        loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{config_path}: bad JSON: {e}") from e
    if not isinstance(loaded, dict):
        raise FormatError(f"{config_path}: config must be a JSON object")
    merged = {k.replace("-", "_"): v for k, v in loaded.items()}
    merged.update(values)  # explicit flags win
    return merged


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    values = {k: v for k, v in vars(args).items()
              if not k.startswith("_") and k not in ("command", "report_kind")}
    func = args._func
    try:
        values = _merge_config(values)
        logging.basicConfig(
            level=logging.INFO if values.get("verbose") else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s")
        return func(values)
    except InvalidGraph as e:
        for v in e.violations:
            print(str(v), file=sys.stderr)
        return EXIT_DOMAIN
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except ValueError as e:
        # out-of-range flag values (thresholds, shard counts) are usage errors
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    except GostError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
