"""Command-line interface: snippet, batch-eval, query-stats, parse-check.

All outputs are JSON (plus DOT files for snippets) with fixed rounding,
so identical inputs and flags produce byte-identical files. Exit codes
partition error classes: 2 for input parse/load errors, 3 for query
errors (empty, too many, or unmatched keywords), 4 for uncoverable
queries, 1 for anything else.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .annotations import category_distribution, load_annotations
from .errors import (AnnotationLoadError, DsnipError, EmptyQueryError,
                     NoConnectedCoverError, ParseError, TooManyKeywordsError,
                     UnmatchedKeywordsError)
from .graph import DEGREE_PENALIZED, SCHEMES, RdfGraph
from .gst import query_biased_snippet
from .illustrative import IllusnipConfig, illustrative_snippet
from .kernels import BACKENDS
from .metrics import build_coverage_report, schema_coverage_parts, to_dot
from .ntriples import parse_ntriples_file, triple_to_line
from .query import DEFAULT_MAX_KEYWORDS, MATCH_FIELDS, load_stopwords

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_QUERY = 3
EXIT_COVER = 4

_CONFIG_KEYS = frozenset({
    "mode", "query", "k", "seeds", "alpha", "beta", "gamma", "weight_scheme",
    "match_fields", "max_keywords", "max_label_length", "drop_unmatched",
    "stopwords", "backend", "lenient", "out", "jobs",
})


def _exit_code(exc: DsnipError) -> int:
    if isinstance(exc, (ParseError, AnnotationLoadError)):
        return EXIT_PARSE
    if isinstance(exc, (EmptyQueryError, TooManyKeywordsError,
                        UnmatchedKeywordsError)):
        return EXIT_QUERY
    if isinstance(exc, NoConnectedCoverError):
        return EXIT_COVER
    return EXIT_ERROR


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _add_common_snippet_args(sub: argparse.ArgumentParser):
    sub.add_argument("--k", type=int, default=20,
                     help="size budget for illustrative snippets (default 20)")
    sub.add_argument("--seeds", type=int, default=10,
                     help="greedy restart count (default 10)")
    sub.add_argument("--alpha", type=float, default=1.0 / 3.0,
                     help="class coverage weight")
    sub.add_argument("--beta", type=float, default=1.0 / 3.0,
                     help="property coverage weight")
    sub.add_argument("--gamma", type=float, default=1.0 / 3.0,
                     help="centrality weight")
    sub.add_argument("--weight-scheme", choices=SCHEMES,
                     default=DEGREE_PENALIZED, help="edge weighting scheme")
    sub.add_argument("--max-keywords", type=int, default=DEFAULT_MAX_KEYWORDS,
                     help="keyword cap for queries (default 10)")
    sub.add_argument("--drop-unmatched", action="store_true",
                     help="proceed on the matched keyword subset instead of failing")
    sub.add_argument("--stopwords", default=None,
                     help="stop-word file (overrides DSNIP_STOPWORDS)")
    sub.add_argument("--backend", choices=BACKENDS, default=None,
                     help="kernel backend (default: DSNIP_BACKEND or auto)")
    sub.add_argument("--max-label-length", type=int, default=40,
                     help="DOT label truncation length (default 40)")
    sub.add_argument("--lenient", action="store_true",
                     help="skip malformed N-Triples lines instead of failing")


def build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help="JSON file with default flag values")
    common.add_argument("--seed", type=int, default=0,
                        help="reserved; all algorithms are deterministic")
    common.add_argument("--trace", action="store_true",
                        help="emit solver state pops as JSON lines on stderr")

    parser = argparse.ArgumentParser(
        prog="dsnip",
        parents=[common],
        description="Snippet generation and evaluation for RDF dataset search.")
    subs = parser.add_subparsers(dest="command", required=True)
    all_subs = []

    sp = subs.add_parser("snippet", parents=[common],
                         help="generate one snippet for one dataset")
    sp.add_argument("dataset", help="N-Triples file")
    sp.add_argument("--mode", choices=("query-biased", "illustrative"),
                    required=True)
    sp.add_argument("--query", default=None,
                    help="query text (required for query-biased mode)")
    sp.add_argument("--out", default="snippet",
                    help="output path prefix (default: snippet)")
    _add_common_snippet_args(sp)
    sp.set_defaults(func=cmd_snippet)
    all_subs.append(sp)

    sp = subs.add_parser("batch-eval", parents=[common],
                         help="evaluate both snippet modes over a corpus")
    sp.add_argument("corpus", help="directory of .nt files")
    sp.add_argument("queries", help="TSV file: datasetId<TAB>query text")
    sp.add_argument("--out", default="batch-out",
                    help="output directory (default: batch-out)")
    sp.add_argument("--jobs", type=int, default=4,
                    help="concurrent query-biased jobs (default 4)")
    _add_common_snippet_args(sp)
    sp.set_defaults(func=cmd_batch_eval)
    all_subs.append(sp)

    sp = subs.add_parser("query-stats", parents=[common],
                         help="distribution statistics for an annotation TSV")
    sp.add_argument("annotations", help="annotation TSV file")
    sp.set_defaults(func=cmd_query_stats)
    all_subs.append(sp)

    sp = subs.add_parser("parse-check", parents=[common],
                         help="parse an N-Triples file and report statistics")
    sp.add_argument("dataset", help="N-Triples file")
    sp.add_argument("--lenient", action="store_true",
                    help="skip malformed lines instead of failing")
    sp.set_defaults(func=cmd_parse_check)
    all_subs.append(sp)
    return parser, all_subs


def _load_graph(args) -> RdfGraph:
    mode = "lenient" if getattr(args, "lenient", False) else "strict"
    graph, _ = parse_ntriples_file(args.dataset, mode=mode)
    return graph


def _trace_fn(args):
    if not getattr(args, "trace", False):
        return None

    def emit(event: dict):
        print(json.dumps(event, ensure_ascii=False), file=sys.stderr)
    return emit


def _illusnip_config(args) -> IllusnipConfig:
    return IllusnipConfig(k=args.k, alpha=args.alpha, beta=args.beta,
                          gamma=args.gamma, seed_count=args.seeds)


def _query_biased_json(graph, args, dataset: str, query: str) -> tuple[dict, str]:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    tree, report = query_biased_snippet(
        graph, query, stopwords=stopwords, max_keywords=args.max_keywords,
        match_fields=MATCH_FIELDS, scheme=args.weight_scheme,
        drop_unmatched=args.drop_unmatched, backend=args.backend,
        trace=_trace_fn(args))
    class_cov, prop_cov = schema_coverage_parts(graph, tree.triples)
    doc = {
        "mode": "query-biased",
        "dataset": dataset,
        "query": query,
        "keywords": list(tree.keyword_witness),
        "triples": [triple_to_line(t) for t in tree.triples],
        "totalWeight": round(tree.total_weight, 4),
        "keywordWitness": {k: v.lexical
                           for k, v in tree.keyword_witness.items()},
        "report": report.to_json_dict(),
        "schemaBreakdown": {"classCoverage": round(class_cov, 4),
                            "propertyCoverage": round(prop_cov, 4)},
    }
    return doc, to_dot(tree.triples, args.max_label_length)


def _illustrative_json(graph, args, dataset: str) -> tuple[dict, str]:
    snippet = illustrative_snippet(graph, _illusnip_config(args),
                                   backend=args.backend)
    report = build_coverage_report(graph, snippet.triples, snippet.nodes())
    doc = {
        "mode": "illustrative",
        "dataset": dataset,
        "k": args.k,
        "triples": [triple_to_line(t) for t in snippet.triples],
        "score": round(snippet.score, 4),
        "scoreBreakdown": snippet.breakdown.to_json_dict(),
        "report": report.to_json_dict(),
    }
    return doc, to_dot(snippet.triples, args.max_label_length)


def cmd_snippet(args) -> int:
    if args.mode == "query-biased" and args.query is None:
        print("snippet: --query is required for query-biased mode",
              file=sys.stderr)
        return EXIT_PARSE
    graph = _load_graph(args)
    if args.mode == "query-biased":
        doc, dot = _query_biased_json(graph, args, args.dataset, args.query)
    else:
        doc, dot = _illustrative_json(graph, args, args.dataset)
    json_path = Path(f"{args.out}.json")
    dot_path = Path(f"{args.out}.dot")
    json_path.write_text(_dump_json(doc), encoding="utf-8")
    dot_path.write_text(dot, encoding="utf-8")
    print(f"wrote {json_path} and {dot_path}")
    return EXIT_OK


def _read_query_pairs(path: str) -> list[tuple[str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise DsnipError(f"bad query line (need datasetId<TAB>query): "
                                 f"{line!r}", stage="batch")
            dataset_id, query = line.split("\t", 1)
            pairs.append((dataset_id.strip(), query.strip()))
    return pairs


def cmd_batch_eval(args) -> int:
    corpus = Path(args.corpus)
    datasets = sorted(p for p in corpus.glob("*.nt"))
    pairs = _read_query_pairs(args.queries)
    if not pairs:
        print("batch-eval: queries file has no entries", file=sys.stderr)
        return EXIT_PARSE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    mode = "lenient" if args.lenient else "strict"
    graphs: dict[str, RdfGraph] = {}
    illus_cov: dict[str, float] = {}
    dataset_error: dict[str, str] = {}
    for path in datasets:
        name = path.stem
        try:
            graph, _ = parse_ntriples_file(path, mode=mode)
            graphs[name] = graph
            doc, dot = _illustrative_json(graph, args, name)
            illus_cov[name] = doc["report"]["weightedSchemaCoverage"]
            (out_dir / f"{name}.illustrative.json").write_text(
                _dump_json(doc), encoding="utf-8")
            (out_dir / f"{name}.illustrative.dot").write_text(
                dot, encoding="utf-8")
        except DsnipError as exc:
            dataset_error[name] = f"{exc.stage}: {exc}"

    def run_pair(item):
        index, (dataset_id, query) = item
        row = {"dataset": dataset_id, "query": query}
        if dataset_id in dataset_error:
            row["status"] = "error"
            row["error"] = dataset_error[dataset_id]
            return row
        graph = graphs.get(dataset_id)
        if graph is None:
            row["status"] = "error"
            row["error"] = f"batch: no dataset named {dataset_id!r} in corpus"
            return row
        try:
            doc, dot = _query_biased_json(graph, args, dataset_id, query)
        except DsnipError as exc:
            row["status"] = "error"
            row["error"] = f"{exc.stage}: {exc}"
            return row
        (out_dir / f"pair-{index:03d}.json").write_text(
            _dump_json(doc), encoding="utf-8")
        (out_dir / f"pair-{index:03d}.dot").write_text(dot, encoding="utf-8")
        row["status"] = "ok"
        row["queryBiasedCoverage"] = doc["report"]["weightedSchemaCoverage"]
        row["illustrativeCoverage"] = illus_cov[dataset_id]
        return row

    with ThreadPoolExecutor(max_workers=max(args.jobs, 1)) as pool:
        rows = list(pool.map(run_pair, enumerate(pairs)))

    ok_rows = [r for r in rows if r["status"] == "ok"]

    def summary(values):
        if not values:
            return {"count": 0}
        return {"count": len(values),
                "meanWeightedSchemaCoverage": round(statistics.fmean(values), 4),
                "stddevWeightedSchemaCoverage": round(statistics.pstdev(values), 4)}

    report = {
        "pairs": rows,
        "summary": {
            "pairs": len(rows),
            "failures": len(rows) - len(ok_rows),
            "queryBiased": summary([r["queryBiasedCoverage"] for r in ok_rows]),
            "illustrative": summary([r["illustrativeCoverage"] for r in ok_rows]),
        },
    }
    text = _dump_json(report)
    (out_dir / "report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK if ok_rows else EXIT_ERROR


def cmd_query_stats(args) -> int:
    records = load_annotations(args.annotations)
    stats = category_distribution(records)
    sys.stdout.write(_dump_json(stats.to_json_dict()))
    return EXIT_OK


def cmd_parse_check(args) -> int:
    mode = "lenient" if args.lenient else "strict"
    _, report = parse_ntriples_file(args.dataset, mode=mode)
    sys.stdout.write(_dump_json(report.to_json_dict()))
    return EXIT_OK


def _apply_config(parser, all_subs, argv: list[str]):
    """Apply --config file values as defaults everywhere before parsing."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return
    with open(known.config, encoding="utf-8") as fh:
        values = json.load(fh)
    if not isinstance(values, dict):
        raise DsnipError("config file must hold a JSON object", stage="config")
    bad = set(values) - _CONFIG_KEYS
    if bad:
        raise DsnipError(f"unknown config keys: {sorted(bad)}", stage="config")
    parser.set_defaults(**values)
    for sub in all_subs:
        sub.set_defaults(**values)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, all_subs = build_parser()
    try:
        _apply_config(parser, all_subs, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except DsnipError as exc:
        print(f"{exc.stage}: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
