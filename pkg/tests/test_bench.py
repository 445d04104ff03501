import numpy as np
import pytest

from tracevec.abstraction import ALL_CLASSES, AbstractionConfig
from tracevec.bench import (
    ABLATION_CONFIGS,
    AnalogySuite,
    Category,
    ErrorRecord,
    SuiteFormatError,
    ablation_config,
    evaluate_suite,
    export_error_dataset,
    format_report,
    load_analogy_suite,
    write_analogy_suite,
    write_error_dataset,
)
from tracevec.corpus import Corpus
from tracevec.embedding import Embedding


def embedding_of(words, vectors):
    w = np.asarray(vectors, dtype=float)
    zeros = np.zeros_like(w)
    return Embedding(list(words), w, zeros,
                     np.zeros(len(words)), np.zeros(len(words)))


class TestSuiteIO:
    def test_round_trip(self, tmp_path):
        suite = AnalogySuite([
            Category("calls", "locks", [("lock", "unlock"), ("mutex", "unmutex")]),
            Category("calls", "alloc", [("kmalloc", "kfree")]),
        ])
        path = tmp_path / "suite.tsv"
        write_analogy_suite(suite, path)
        loaded = load_analogy_suite(path)
        assert loaded == suite

    def test_wrong_column_count_names_the_row(self, tmp_path):
        path = tmp_path / "suite.tsv"
        path.write_text("calls\tlocks\tlock\n")
        with pytest.raises(SuiteFormatError) as exc:
            load_analogy_suite(path)
        assert "row 1" in str(exc.value)

    def test_duplicate_pair_rejected(self, tmp_path):
        path = tmp_path / "suite.tsv"
        path.write_text("calls\tlocks\ta\tb\ncalls\tlocks\ta\tb\n")
        with pytest.raises(SuiteFormatError):
            load_analogy_suite(path)

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "suite.tsv"
        path.write_text("# header\n\ncalls\tlocks\ta\tb\n")
        suite = load_analogy_suite(path)
        assert suite.categories[0].pairs == [("a", "b")]


class TestSuiteArithmetic:
    def suite_of_size(self, n):
        return AnalogySuite([
            Category("calls", "c", [(f"a{i}", f"b{i}") for i in range(n)])])

    @pytest.mark.parametrize("n,total", [(2, 2), (3, 6), (53, 2756), (64, 4032)])
    def test_totals_are_ordered_pairs(self, n, total):
        # vocabulary is empty, so every test counts as OOV — totals only
        emb = embedding_of(["x"], [[1.0]])
        report = evaluate_suite(self.suite_of_size(n), emb)
        assert report.total == n * (n - 1) == total
        assert report.oov == report.total

    def test_oov_counts_as_failed_in_accuracy(self):
        # pair 0 resolvable, pair 1's words absent
        emb = embedding_of(
            ["a0", "b0", "a1", "b1"],
            [[1, 0, 0], [1, 0, 1], [0, 1, 0], [0, 1, 1]])
        suite = AnalogySuite([Category("calls", "c", [
            ("a0", "b0"), ("a1", "b1"), ("a2", "b2")])])
        report = evaluate_suite(suite, emb)
        assert report.total == 6
        assert report.oov == 4
        assert report.passed == 2
        assert report.accuracy == pytest.approx(2 / 6)

    def test_format_report_has_totals_row(self):
        emb = embedding_of(["x"], [[1.0]])
        text = format_report(evaluate_suite(self.suite_of_size(2), emb))
        assert text.splitlines()[-1].startswith("all")


class TestAblationConfigs:
    def test_nine_named_configurations(self):
        assert len(ABLATION_CONFIGS) == 9
        assert ABLATION_CONFIGS[0] == "baseline"

    def test_baseline_is_the_default(self):
        assert ablation_config("baseline") == AbstractionConfig()

    @pytest.mark.parametrize("cls", sorted(ALL_CLASSES - {"boundary"}) + ["boundary"])
    def test_no_class_configs(self, cls):
        if f"no-{cls}" not in ABLATION_CONFIGS:
            pytest.skip(f"no-{cls} not among the named configurations")
        cfg = ablation_config(f"no-{cls}")
        assert cls not in cfg.enabled_classes

    def test_with_stopwords_clears_the_list(self):
        assert ablation_config("with-stopwords").stop_words == frozenset()

    def test_syntactic_keeps_calls_stores_and_boundaries(self):
        cfg = ablation_config("syntactic")
        assert cfg.enabled_classes == {"boundary", "accesspath"}
        assert cfg.excluded_tokens == {"AccessPathSensitive"}

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            ablation_config("no-such-config")


class TestErrorExport:
    def test_basic_record(self):
        corpus = Corpus([["$START", "open", "open_$EQ_0", "$ERR",
                          "$RET_ENOMEM", "$END"]])
        (rec,) = export_error_dataset(corpus)
        assert rec == ErrorRecord(["$START", "open", "open_$EQ_0"], "ENOMEM")

    def test_passing_sentences_skipped(self):
        corpus = Corpus([["$START", "g", "$RET_0", "$END"]])
        assert export_error_dataset(corpus) == []

    def test_ptr_err_sentences_dropped(self):
        corpus = Corpus([["$START", "g", "$ERR", "$RET_PTR_ERR", "$END"]])
        assert export_error_dataset(corpus) == []

    def test_missing_return_word_warns_and_skips(self):
        corpus = Corpus([["$START", "$ERR", "oops", "$END"]])
        warnings = []
        assert export_error_dataset(corpus, warn=warnings.append) == []
        assert len(warnings) == 1

    def test_truncation_keeps_the_last_tokens(self):
        body = [f"w{i}" for i in range(150)]
        corpus = Corpus([["$START"] + body + ["$ERR", "$RET_EIO", "$END"]])
        (rec,) = export_error_dataset(corpus, max_tokens=100)
        assert len(rec.tokens) == 100
        assert rec.tokens[-1] == "w149"

    def test_write_error_dataset(self, tmp_path):
        path = tmp_path / "errors.tsv"
        write_error_dataset([ErrorRecord(["a", "b"], "EIO")], path)
        assert path.read_text() == "EIO\ta b\n"
