"""Command-line pipeline: fetch, stats, rank, compose, screen, report, run-all.

Exit codes: 0 success, 1 usage/config error, 2 network or I/O failure.
Offline mode substitutes the bundled fixture corpora for live fetching so the
whole pipeline runs deterministically without a network.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import shutil
import sys
from importlib import resources
from pathlib import Path

from litmine import __version__, boolquery, reporting
from litmine.config import ConfigError, PipelineConfig, load_config
from litmine.corpus import Corpus, CorpusError, load_corpus, save_corpus
from litmine.entrez import (EntrezClient, NetworkError, ServiceError,
                            build_negative_corpus, build_positive_corpus, count_by_year)
from litmine.ranking import CurationList, load_curation, score_terms, select_terms
from litmine.screening import ScreeningError, funnel_export, read_votes_csv, run_stage
from litmine.textstats import distinct_word_count, doc_frequency

POSITIVE_FILE = "positive.jsonl"
NEGATIVE_FILE = "negative.jsonl"
TERM_TABLE_FILE = "term_table.tsv"
CLOUD_FILE = "cloud.svg"
SELECTED_TERMS_FILE = "selected_terms.txt"
STATS_FILE = "corpus_stats.json"
STAGE_REPORT_FILE = "stage_report.json"
FUNNEL_FILE = "funnel.json"
TREND_FILE = "trend.csv"
BUNDLE_FILE = "report_bundle.json"

DIALECT_CHOICES = [d.value for d in boolquery.Dialect]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="litmine.json", help="pipeline config JSON")
    common.add_argument("--offline", action="store_true",
                        help="never touch the network; fetch uses bundled fixtures")
    common.add_argument("--output-dir", default=None, help="override the config output_dir")
    common.add_argument("--dialect", action="append", choices=DIALECT_CHOICES,
                        help="query dialect for compose (repeatable)")
    common.add_argument("--precise", action="store_true",
                        help="add full-precision columns to the term table")

    parser = argparse.ArgumentParser(prog="litmine", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"litmine {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", parents=[common], help="build and save both corpora")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("stats", parents=[common], help="corpus vocabulary stats and top-word tables")
    p.add_argument("--top", type=int, default=10, help="rows in the top-word tables")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rank", parents=[common],
                       help="score terms, apply curation, emit table/cloud/selection")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compose", parents=[common],
                       help="combine a user expression with the selected terms")
    p.add_argument("expression", nargs="?", default=None,
                   help="Boolean expression (defaults to compose.expression from config)")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("screen", parents=[common], help="aggregate screening votes")
    p.add_argument("votes", nargs="?", default=None, help="votes CSV (defaults to screen.votes)")
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("report", parents=[common], help="emit trend data and the report manifest")
    p.add_argument("--counts-csv", default=None,
                   help="engine,year,count CSV for engines without a public API")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run-all", parents=[common], help="run the whole pipeline")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--counts-csv", default=None)
    p.set_defaults(func=cmd_run_all)

    return parser


def _load(args) -> PipelineConfig:
    config = load_config(args.config)
    if args.output_dir:
        config.output_dir = Path(args.output_dir).resolve()
    return config


def _outdir(config: PipelineConfig) -> Path:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    return config.output_dir


def _client() -> EntrezClient:
    return EntrezClient()


def _load_corpora(config: PipelineConfig) -> tuple[Corpus, Corpus]:
    outdir = _outdir(config)
    missing = [name for name in (POSITIVE_FILE, NEGATIVE_FILE) if not (outdir / name).exists()]
    if missing:
        raise ConfigError(f"{', '.join(missing)} not found in {outdir}; run 'fetch' first")
    return load_corpus(outdir / POSITIVE_FILE), load_corpus(outdir / NEGATIVE_FILE)


# -- subcommands --------------------------------------------------------------

def cmd_fetch(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    if args.offline:
        fixtures = resources.files("litmine").joinpath("data/fixtures")
        for name in (POSITIVE_FILE, NEGATIVE_FILE):
            with resources.as_file(fixtures.joinpath(name)) as src:
                shutil.copyfile(src, outdir / name)
        print(f"offline: copied fixture corpora to {outdir}")
        return 0
    client = _client()
    positive = build_positive_corpus(config.positive, client)
    save_corpus(positive, outdir / POSITIVE_FILE)
    print(f"wrote {outdir / POSITIVE_FILE} ({positive.n_docs} docs)")
    negative = build_negative_corpus(config.negative, client)
    save_corpus(negative, outdir / NEGATIVE_FILE)
    print(f"wrote {outdir / NEGATIVE_FILE} ({negative.n_docs} docs)")
    return 0


def cmd_stats(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    stats = {}
    for corpus in _load_corpora(config):
        table = doc_frequency(corpus, config.tokenizer)
        stats[corpus.label] = {
            "n_docs": corpus.n_docs,
            # Raw word totals are ambiguous about stop-word handling, so both
            # variants are reported.
            "distinct_words": distinct_word_count(corpus, config.tokenizer),
            "distinct_words_with_stop_words": distinct_word_count(
                corpus, config.tokenizer, remove_stop_words=False),
        }
        tsv = reporting.emit_frequency_table(table, args.top, config.snapshot())
        table_path = outdir / f"top_terms_{corpus.label}.tsv"
        table_path.write_text(tsv, encoding="utf-8")
        print(f"wrote {table_path}")
    stats_path = outdir / STATS_FILE
    stats_path.write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {stats_path}")
    return 0


def _curation(config: PipelineConfig) -> CurationList:
    if config.curation_path is not None:
        return load_curation(config.curation_path, merge_plurals=config.merge_plurals)
    return CurationList(merge_plurals=config.merge_plurals)


def cmd_rank(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    positive, negative = _load_corpora(config)
    p_table = doc_frequency(positive, config.tokenizer)
    n_table = doc_frequency(negative, config.tokenizer)
    scores = score_terms(p_table, n_table, config.ranker)
    selected = select_terms(scores, config.ranker, _curation(config))

    by_word = {t.word: t for t in scores}
    selected_scores = [by_word[w] for w in selected if w in by_word]
    snapshot = config.snapshot()

    table_path = outdir / TERM_TABLE_FILE
    table_path.write_text(
        reporting.emit_term_table(selected_scores, top_k=len(selected_scores),
                                  config_snapshot=snapshot, precise=args.precise),
        encoding="utf-8")
    cloud_path = outdir / CLOUD_FILE
    cloud_path.write_text(reporting.emit_word_cloud(selected_scores, snapshot), encoding="utf-8")
    terms_path = outdir / SELECTED_TERMS_FILE
    terms_path.write_text("\n".join(selected) + "\n", encoding="utf-8")
    print(f"wrote {table_path}, {cloud_path}, {terms_path} ({len(selected)} terms)")
    return 0


def cmd_compose(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    expression = args.expression or config.compose_expression
    if not expression:
        raise ConfigError("compose requires an expression argument or compose.expression in config")
    terms_path = outdir / SELECTED_TERMS_FILE
    if not terms_path.exists():
        raise ConfigError(f"{terms_path} not found; run 'rank' first")
    terms = [line for line in terms_path.read_text(encoding="utf-8").splitlines() if line.strip()]
    user_expr = boolquery.parse(expression)
    combined = boolquery.and_combine(user_expr, boolquery.or_of_terms(terms))
    for name in args.dialect or [boolquery.Dialect.GENERIC.value]:
        rendered = boolquery.serialize(combined, boolquery.Dialect(name))
        print(f"{name}\t{rendered}")
        out_path = outdir / f"composed_query.{name}.txt"
        out_path.write_text(rendered + "\n", encoding="utf-8")
    return 0


def cmd_screen(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    votes_path = Path(args.votes) if args.votes else config.votes_path
    if votes_path is None:
        raise ConfigError("screen requires a votes CSV argument or screen.votes in config")
    votes = read_votes_csv(votes_path)
    report = run_stage(votes, config.policy)
    snapshot = config.snapshot()

    report_path = outdir / STAGE_REPORT_FILE
    payload = {"meta": {"tool": f"litmine {__version__}", "config": snapshot}}
    payload.update(report.to_dict())
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    stages = (list(config.pre_stages)
              + [("crowd screen", len(votes), len(report.included))]
              + list(config.post_stages))
    funnel = funnel_export(stages)
    funnel_path = outdir / FUNNEL_FILE
    funnel_path.write_text(reporting.funnel_to_json(funnel, snapshot), encoding="utf-8")

    counts = report.counts
    print(f"wrote {report_path} (majority={counts['include_majority']}, "
          f"inconclusive={counts['include_inconclusive']}, "
          f"expert={counts['include_expert_override']}, excluded={counts['exclude']}; "
          f"included {len(report.included)} of {len(votes)})")
    print(f"wrote {funnel_path}")
    return 0


def _read_counts_csv(path: Path) -> dict[str, list[tuple[int, int]]]:
    series: dict[str, list[tuple[int, int]]] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"engine", "year", "count"}
        if reader.fieldnames is None or set(reader.fieldnames) != expected:
            raise ConfigError(f"{path}: expected CSV header engine,year,count")
        for row in reader:
            try:
                series.setdefault(row["engine"], []).append((int(row["year"]), int(row["count"])))
            except ValueError as exc:
                raise ConfigError(f"{path}: line {reader.line_num}: {exc}") from exc
    for points in series.values():
        points.sort()
    return series


def cmd_report(args) -> int:
    config = _load(args)
    outdir = _outdir(config)
    snapshot = config.snapshot()

    series: dict[str, list[tuple[int, int]]] = {}
    counts_csv = Path(args.counts_csv) if getattr(args, "counts_csv", None) else config.trend_counts_csv
    if counts_csv is not None:
        series.update(_read_counts_csv(Path(counts_csv)))
    if not args.offline and config.trend_query and config.trend_years:
        series["pubmed"] = count_by_year(config.trend_query, config.trend_years, _client(),
                                         spec=config.positive)
    trend_path = None
    if series:
        trend_path = outdir / TREND_FILE
        trend_path.write_text(reporting.emit_trend_csv(series, snapshot), encoding="utf-8")
        print(f"wrote {trend_path}")

    def existing(name: str) -> str | None:
        p = outdir / name
        return str(p) if p.exists() else None

    bundle = reporting.ReportBundle(
        term_table_path=existing(TERM_TABLE_FILE),
        cloud_path=existing(CLOUD_FILE),
        trend_path=str(trend_path) if trend_path else None,
        funnel_path=existing(FUNNEL_FILE),
        # Offline runs must be byte-stable, so the timestamp is omitted there.
        generated_at=None if args.offline else dt.datetime.now(dt.timezone.utc).isoformat(),
        config_snapshot=snapshot,
    )
    bundle_path = outdir / BUNDLE_FILE
    bundle_path.write_text(bundle.to_json(), encoding="utf-8")
    print(f"wrote {bundle_path}")
    return 0


def cmd_run_all(args) -> int:
    for step in (cmd_fetch, cmd_stats, cmd_rank):
        rc = step(args)
        if rc != 0:
            return rc
    config = _load(args)
    args.expression = None
    args.votes = None
    if config.compose_expression:
        rc = cmd_compose(args)
        if rc != 0:
            return rc
    if config.votes_path is not None:
        rc = cmd_screen(args)
        if rc != 0:
            return rc
    return cmd_report(args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NetworkError, ServiceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, CorpusError, ScreeningError, boolquery.QuerySyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
