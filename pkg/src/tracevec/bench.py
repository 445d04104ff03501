"""Analogy-suite evaluation, ablation orchestration, and the error-code
dataset export."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .abstraction import ALL_CLASSES, AbstractionConfig
from .corpus import Corpus, build_vocabulary
from .embedding import Embedding, TrainParams, build_cooccurrence, train_embedding
from .pipeline import corpus_from_traces, trace_programs
from .query import OOVError, solve_analogy

__all__ = [
    "ABLATION_CONFIGS",
    "AnalogySuite",
    "Category",
    "ErrorRecord",
    "EvalReport",
    "SuiteFormatError",
    "ablation_config",
    "evaluate_suite",
    "export_error_dataset",
    "format_report",
    "load_analogy_suite",
    "run_ablation",
    "write_error_dataset",
]


class SuiteFormatError(Exception):
    pass


# ---------------------------------------------------------------------------
# Analogy suites
# ---------------------------------------------------------------------------

@dataclass
class Category:
    type: str
    name: str
    pairs: list[tuple[str, str]]


@dataclass
class AnalogySuite:
    categories: list[Category]


def load_analogy_suite(path) -> AnalogySuite:
    """Read a TSV suite: type, category, wordA, wordB per row."""
    categories: dict[tuple[str, str], Category] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise SuiteFormatError(f"row {lineno}: expected 4 columns, found {len(parts)}")
            typ, name, a, b = parts
            cat = categories.setdefault((typ, name), Category(typ, name, []))
            if (a, b) in cat.pairs:
                raise SuiteFormatError(f"row {lineno}: duplicate pair {a}/{b} in {name!r}")
            cat.pairs.append((a, b))
    return AnalogySuite(list(categories.values()))


def write_analogy_suite(suite: AnalogySuite, path):
    with open(path, "w", encoding="utf-8") as fh:
        for cat in suite.categories:
            for a, b in cat.pairs:
                fh.write(f"{cat.type}\t{cat.name}\t{a}\t{b}\n")


@dataclass
class CategoryResult:
    type: str
    name: str
    passed: int = 0
    failed: int = 0
    oov: int = 0

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.oov


@dataclass
class EvalReport:
    categories: list[CategoryResult]

    @property
    def passed(self):
        return sum(c.passed for c in self.categories)

    @property
    def failed(self):
        return sum(c.failed for c in self.categories)

    @property
    def oov(self):
        return sum(c.oov for c in self.categories)

    @property
    def total(self):
        return sum(c.total for c in self.categories)

    @property
    def accuracy(self) -> float:
        # OOV tests stay in the denominator: they count as failures.
        return self.passed / self.total if self.total else 0.0


def evaluate_suite(suite: AnalogySuite, emb: Embedding) -> EvalReport:
    """Every ordered pair of distinct pairs in a category forms one test:
    ((A, B), (C, D)) passes iff solve_analogy(A, B, C) == D."""
    vocab = set(emb.words)
    results = []
    for cat in suite.categories:
        result = CategoryResult(cat.type, cat.name)
        for a, b in cat.pairs:
            for c, d in cat.pairs:
                if (a, b) == (c, d):
                    continue
                if d not in vocab:
                    result.oov += 1
                    continue
                try:
                    answer = solve_analogy(emb, a, b, c)
                except OOVError:
                    result.oov += 1
                    continue
                if answer == d:
                    result.passed += 1
                else:
                    result.failed += 1
        results.append(result)
    return EvalReport(results)


def format_report(report: EvalReport) -> str:
    """Aligned text table, one row per category plus a totals row."""
    rows = [("type", "category", "passed", "failed", "oov", "total", "accuracy")]
    for c in report.categories:
        acc = c.passed / c.total if c.total else 0.0
        rows.append((c.type, c.name, str(c.passed), str(c.failed),
                     str(c.oov), str(c.total), f"{acc:.2%}"))
    rows.append(("all", "-", str(report.passed), str(report.failed),
                 str(report.oov), str(report.total), f"{report.accuracy:.2%}"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                     for row in rows)


def report_tsv(report: EvalReport) -> str:
    lines = ["type\tcategory\tpassed\tfailed\toov\ttotal"]
    for c in report.categories:
        lines.append(f"{c.type}\t{c.name}\t{c.passed}\t{c.failed}\t{c.oov}\t{c.total}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Ablation study
# ---------------------------------------------------------------------------

#: The eight named ablation configurations plus the purely syntactic one
#: (boundary, AccessPathStore, and Called only).
ABLATION_CONFIGS = (
    "baseline",
    "no-dataflow",
    "no-retcmp",
    "no-accesspath",
    "no-returns",
    "no-error",
    "no-boundary",
    "with-stopwords",
    "syntactic",
)


def ablation_config(name: str, base: AbstractionConfig | None = None) -> AbstractionConfig:
    base = base if base is not None else AbstractionConfig()
    if name == "baseline":
        return base
    if name.startswith("no-"):
        cls = name[3:]
        if cls not in ALL_CLASSES:
            raise ValueError(f"unknown ablation configuration {name!r}")
        return base.without(cls)
    if name == "with-stopwords":
        return replace(base, stop_words=frozenset())
    if name == "syntactic":
        return replace(base,
                       enabled_classes=frozenset({"boundary", "accesspath"}),
                       excluded_tokens=frozenset({"AccessPathSensitive"}))
    raise ValueError(f"unknown ablation configuration {name!r}")


def run_ablation(programs, config_names, suite: AnalogySuite,
                 params: TrainParams) -> dict[str, EvalReport]:
    """Regenerate the corpus per configuration, train with shared
    parameters, and evaluate the shared suite.

    Vocabulary filtering is disabled (min_count 0) regardless of
    params.min_count: abstractions change word frequencies, so a frequency
    threshold would not compare configurations fairly.
    """
    base = AbstractionConfig()
    traces = trace_programs(programs, base.path_budget)
    reports = {}
    for name in config_names:
        cfg = ablation_config(name, base)
        corpus = corpus_from_traces(traces, cfg, config_id=name)
        vocab = build_vocabulary(corpus, min_count=0)
        cooc = build_cooccurrence(corpus, vocab, params.window)
        emb = train_embedding(cooc, params)
        reports[name] = evaluate_suite(suite, emb)
    return reports


def ablation_tsv(reports: dict[str, EvalReport]) -> str:
    lines = ["config\tpassed\tfailed\toov\taccuracy"]
    for name, rep in reports.items():
        lines.append(f"{name}\t{rep.passed}\t{rep.failed}\t{rep.oov}\t{rep.accuracy:.4f}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Error-code dataset export
# ---------------------------------------------------------------------------

@dataclass
class ErrorRecord:
    tokens: list[str]
    label: str


def export_error_dataset(corpus: Corpus, max_tokens: int = 100,
                         warn=None) -> list[ErrorRecord]:
    """Select failing sentences (those containing $ERR), label each with its
    returned error code, and strip the trailing $ERR / $RET_* / $END words.

    Sentences returning $RET_PTR_ERR carry no error code and are dropped.
    Sentences with $ERR but no return word are skipped with a warning.
    """
    records = []
    for idx, sentence in enumerate(corpus.sentences):
        if "$ERR" not in sentence:
            continue
        words = list(sentence)
        if words and words[-1] == "$END":
            words.pop()
        if not words or not words[-1].startswith("$RET_"):
            if warn is not None:
                warn(f"sentence {idx}: $ERR without a return word; skipped")
            continue
        ret = words.pop()
        if ret == "$RET_PTR_ERR":
            continue
        label = ret[len("$RET_"):]
        if words and words[-1] == "$ERR":
            words.pop()
        records.append(ErrorRecord(words[-max_tokens:], label))
    return records


def write_error_dataset(records, path):
    """TSV export: label, space-joined tokens."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.label + "\t" + " ".join(rec.tokens) + "\n")
