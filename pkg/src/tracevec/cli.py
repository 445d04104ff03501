"""Command-line pipeline: trace, encode, corpus, train, query, bench,
ablate, export-errors.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal error.
Flag values override config-file values.
"""

from __future__ import annotations

import argparse
import os
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import bench as bench_mod
from .abstraction import (
    ALL_CLASSES,
    AbstractionConfig,
    load_error_table,
)
from .corpus import (
    CorpusFormatError,
    EmptyVocabularyError,
    build_vocabulary,
    read_corpus,
    write_corpus,
    write_vocabulary,
)
from .embedding import (
    EmbeddingFormatError,
    TrainParams,
    TrainingDivergedError,
    build_cooccurrence,
    load_embedding,
    persist_embedding,
    train_embedding,
)
from .encoding import load_stop_words
from .frontend import ParseError, parse_program
from .pipeline import corpus_from_traces, trace_programs
from .query import OOVError, Subspace, averaged_query, nearest_neighbors, solve_analogy
from .symex import format_trace, parse_trace_dump

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Configuration loading
# ---------------------------------------------------------------------------

def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"bad config {path}: {exc}") from exc


def _abstraction_config(raw: dict, args) -> AbstractionConfig:
    section = raw.get("abstraction", {})
    cfg = AbstractionConfig()
    classes = section.get("classes")
    if classes is not None:
        cfg = replace(cfg, enabled_classes=frozenset(classes))
    if "constants" in section:
        cfg = replace(cfg, constants=frozenset(section["constants"]))
    if "errno" in section:
        cfg = replace(cfg, err_codes=load_error_table(section["errno"]))
    if "stopwords" in section:
        cfg = replace(cfg, stop_words=load_stop_words(section["stopwords"]))
    if "path_budget" in section:
        cfg = replace(cfg, path_budget=int(section["path_budget"]))
    if getattr(args, "budget", None) is not None:
        cfg = replace(cfg, path_budget=args.budget)
    if getattr(args, "ablation", None):
        cfg = bench_mod.ablation_config(args.ablation, cfg)
    unknown = cfg.enabled_classes - ALL_CLASSES
    if unknown:
        raise InputError(f"unknown abstraction classes {sorted(unknown)}")
    return cfg


def _train_params(raw: dict, args) -> TrainParams:
    section = dict(raw.get("train", {}))
    for key in ("dim", "window", "iterations", "learning_rate", "x_max",
                "alpha", "seed", "min_count"):
        value = getattr(args, key, None)
        if value is not None:
            section[key] = value
    try:
        return TrainParams(**section)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad training parameters: {exc}") from exc


def _parse_sources(paths) -> list:
    programs = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        try:
            programs.append(parse_program(text, str(path)))
        except ParseError as exc:
            raise InputError(f"{path}: {exc}") from exc
    return programs


def _collect_sources(paths) -> list[str]:
    files = []
    for path in paths:
        p = Path(path)
        if p.is_dir():
            files.extend(sorted(str(f) for f in p.rglob("*.mc")))
        else:
            files.append(str(p))
    if not files:
        raise InputError("no source files found")
    return files


class _artifact:
    """Remove a partially written artifact when the command fails."""

    def __init__(self, path):
        self.path = path

    def __enter__(self):
        return self.path

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and self.path is not None:
            try:
                os.unlink(self.path)
            except OSError:
                pass
        return False


def _trace_sources(args, cfg: AbstractionConfig):
    programs = _parse_sources(_collect_sources(args.sources))
    threads = getattr(args, "threads", 1) or 1
    if threads > 1:
        procs = [p for prog in programs for p in prog.procedures]
        from .frontend import lower_to_cfg
        from .symex import enumerate_paths
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_proc = list(pool.map(
                lambda proc: enumerate_paths(lower_to_cfg(proc), cfg.path_budget, proc.name),
                procs))
        return programs, [t for chunk in per_proc for t in chunk]
    return programs, trace_programs(programs, cfg.path_budget)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_trace(args):
    cfg = _abstraction_config(_load_config(args.config), args)
    _, traces = _trace_sources(args, cfg)
    with _artifact(args.output), open(args.output, "w", encoding="utf-8") as fh:
        for t in traces:
            fh.write(format_trace(t))
            fh.write("\n")
    return EXIT_OK


def _cmd_encode(args):
    cfg = _abstraction_config(_load_config(args.config), args)
    try:
        with open(args.input, encoding="utf-8") as fh:
            traces = parse_trace_dump(fh)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    corpus = corpus_from_traces(traces, cfg, source_names=(args.input,))
    with _artifact(args.output):
        write_corpus(corpus, args.output)
    return EXIT_OK


def _cmd_corpus(args):
    cfg = _abstraction_config(_load_config(args.config), args)
    programs, traces = _trace_sources(args, cfg)
    corpus = corpus_from_traces(traces, cfg,
                                source_names=tuple(p.source_name for p in programs))
    with _artifact(args.output):
        write_corpus(corpus, args.output)
    return EXIT_OK


def _cmd_train(args):
    params = _train_params(_load_config(args.config), args)
    try:
        corpus = read_corpus(args.input)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    vocab = build_vocabulary(corpus, params.min_count)
    cooc = build_cooccurrence(corpus, vocab, params.window)
    emb = train_embedding(cooc, params)
    with _artifact(args.output):
        persist_embedding(emb, args.output)
    if args.vocab_output:
        write_vocabulary(vocab, args.vocab_output)
    return EXIT_OK


def _load_vectors(path):
    try:
        return load_embedding(path)
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _print_ranked(ranked):
    for word, sim in ranked:
        print(f"{word}\t{sim:.6f}")


def _cmd_query(args):
    emb = _load_vectors(args.vectors)
    sub = Subspace.from_pattern(args.subspace) if args.subspace else None
    if args.query_kind == "similar":
        if args.word not in emb.words:
            raise InputError(f"out-of-vocabulary word {args.word!r}")
        target = emb.query_vector(args.word)
        _print_ranked(nearest_neighbors(emb, target, args.k, sub, exclude={args.word}))
    elif args.query_kind == "analogy":
        try:
            answer = solve_analogy(emb, args.a, args.b, args.c)
        except OOVError as exc:
            raise InputError(str(exc)) from exc
        print(answer)
    else:  # avg
        words = [w for w in args.words.split(",") if w]
        if sub is None:
            raise UsageError("avg requires --subspace")
        try:
            _print_ranked(averaged_query(emb, words, sub, args.k))
        except OOVError as exc:
            raise InputError(str(exc)) from exc
    return EXIT_OK


def _cmd_bench(args):
    emb = _load_vectors(args.vectors)
    try:
        suite = bench_mod.load_analogy_suite(args.suite)
    except (OSError, bench_mod.SuiteFormatError) as exc:
        raise InputError(str(exc)) from exc
    report = bench_mod.evaluate_suite(suite, emb)
    print(bench_mod.format_report(report))
    print(f"accuracy: {report.accuracy:.4f}")
    if args.output:
        with _artifact(args.output), open(args.output, "w", encoding="utf-8") as fh:
            fh.write(bench_mod.report_tsv(report))
    return EXIT_OK


def _cmd_ablate(args):
    raw = _load_config(args.config)
    params = _train_params(raw, args)
    programs = _parse_sources(_collect_sources(args.sources))
    try:
        suite = bench_mod.load_analogy_suite(args.suite)
    except (OSError, bench_mod.SuiteFormatError) as exc:
        raise InputError(str(exc)) from exc
    names = args.configs.split(",") if args.configs else list(bench_mod.ABLATION_CONFIGS)
    reports = bench_mod.run_ablation(programs, names, suite, params)
    text = bench_mod.ablation_tsv(reports)
    print(text, end="")
    if args.output:
        with _artifact(args.output), open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_export_errors(args):
    try:
        corpus = read_corpus(args.input)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    records = bench_mod.export_error_dataset(
        corpus, warn=lambda msg: print(f"warning: {msg}", file=sys.stderr))
    with _artifact(args.output):
        bench_mod.write_error_dataset(records, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def _add_train_flags(p):
    p.add_argument("--dim", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--iters", dest="iterations", type=int)
    p.add_argument("--lr", dest="learning_rate", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--min-count", dest="min_count", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracevec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="TOML config file")

    p = sub.add_parser("trace", help="dump raw traces for source files")
    common(p)
    p.add_argument("sources", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("encode", help="abstract and encode a raw trace dump")
    common(p)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--ablation", choices=bench_mod.ABLATION_CONFIGS)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("corpus", help="trace + encode sources into a corpus")
    common(p)
    p.add_argument("sources", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--ablation", choices=bench_mod.ABLATION_CONFIGS)
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("train", help="train vectors on a corpus")
    common(p)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--vocab-output")
    _add_train_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("query", help="similarity / analogy / averaged queries")
    p.add_argument("--vectors", required=True)
    qsub = p.add_subparsers(dest="query_kind", required=True)
    q = qsub.add_parser("similar")
    q.add_argument("word")
    q.add_argument("-k", type=int, default=5)
    q.add_argument("--subspace")
    q.set_defaults(func=_cmd_query)
    q = qsub.add_parser("analogy")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("c")
    q.add_argument("--subspace")
    q.set_defaults(func=_cmd_query)
    q = qsub.add_parser("avg")
    q.add_argument("words", help="comma-separated word list")
    q.add_argument("-k", type=int, default=5)
    q.add_argument("--subspace", required=True)
    q.set_defaults(func=_cmd_query)

    p = sub.add_parser("bench", help="evaluate an analogy suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("ablate", help="run the ablation configurations")
    common(p)
    p.add_argument("sources", nargs="+")
    p.add_argument("--suite", required=True)
    p.add_argument("--configs", help="comma-separated configuration names")
    p.add_argument("-o", "--output")
    _add_train_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("export-errors", help="export the error-code dataset")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_export_errors)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        # vectors flag lives on the query parser, not its subparsers
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, CorpusFormatError, EmptyVocabularyError,
            EmbeddingFormatError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TrainingDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - unexpected failure
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
