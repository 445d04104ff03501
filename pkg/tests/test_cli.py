import pytest

from tracevec.cli import main

SOURCE = """
int open_then_close() {
    int h = opener();
    if (h == 0) {
        return -12;
    }
    closer(h);
    return 0;
}

int other() {
    int h = opener();
    closer(h);
    return 0;
}
"""


@pytest.fixture()
def source_file(tmp_path):
    path = tmp_path / "prog.mc"
    path.write_text(SOURCE)
    return path


@pytest.fixture()
def corpus_file(tmp_path, source_file):
    out = tmp_path / "corpus.txt"
    assert main(["corpus", str(source_file), "-o", str(out)]) == 0
    return out


@pytest.fixture()
def vectors_file(tmp_path, corpus_file):
    out = tmp_path / "vectors.txt"
    assert main(["train", "-i", str(corpus_file), "-o", str(out),
                 "--dim", "8", "--iters", "40", "--min-count", "0",
                 "--window", "5"]) == 0
    return out


class TestPipelineCommands:
    def test_corpus_output(self, corpus_file):
        lines = corpus_file.read_text().splitlines()
        assert len(lines) == 3  # two paths + one straight line
        assert all(line.startswith("$START") for line in lines)

    def test_trace_then_encode_matches_corpus(self, tmp_path, source_file,
                                              corpus_file):
        dump = tmp_path / "traces.txt"
        encoded = tmp_path / "encoded.txt"
        assert main(["trace", str(source_file), "-o", str(dump)]) == 0
        assert main(["encode", "-i", str(dump), "-o", str(encoded)]) == 0
        assert encoded.read_text() == corpus_file.read_text()

    def test_directory_source(self, tmp_path, source_file, corpus_file):
        out = tmp_path / "fromdir.txt"
        assert main(["corpus", str(tmp_path), "-o", str(out)]) == 0
        assert out.read_text() == corpus_file.read_text()

    def test_train_writes_vocab(self, tmp_path, corpus_file):
        out = tmp_path / "v.txt"
        vocab = tmp_path / "vocab.tsv"
        assert main(["train", "-i", str(corpus_file), "-o", str(out),
                     "--dim", "4", "--iters", "5", "--min-count", "0",
                     "--vocab-output", str(vocab)]) == 0
        assert vocab.exists() and out.exists()

    def test_query_similar(self, vectors_file, capsys):
        assert main(["query", "--vectors", str(vectors_file),
                     "similar", "opener", "-k", "3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert 1 <= len(out) <= 3
        assert all("\t" in line for line in out)

    def test_query_analogy(self, vectors_file, capsys):
        assert main(["query", "--vectors", str(vectors_file),
                     "analogy", "opener", "closer", "opener"]) == 0
        assert capsys.readouterr().out.strip()

    def test_query_avg(self, vectors_file, capsys):
        assert main(["query", "--vectors", str(vectors_file),
                     "avg", "opener,closer", "--subspace", "*", "-k", "2"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 2

    def test_bench(self, tmp_path, vectors_file, capsys):
        suite = tmp_path / "suite.tsv"
        suite.write_text("calls\tc\topener\tcloser\ncalls\tc\tx\ty\n")
        assert main(["bench", "--suite", str(suite),
                     "--vectors", str(vectors_file)]) == 0
        assert "accuracy" in capsys.readouterr().out

    def test_export_errors(self, tmp_path, corpus_file):
        out = tmp_path / "errors.tsv"
        assert main(["export-errors", "-i", str(corpus_file),
                     "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("ENOMEM\t")

    def test_ablation_flag_changes_the_corpus(self, tmp_path, source_file,
                                              corpus_file):
        out = tmp_path / "syntactic.txt"
        assert main(["corpus", str(source_file), "-o", str(out),
                     "--ablation", "syntactic"]) == 0
        assert out.read_text() != corpus_file.read_text()
        assert "$RET_ENOMEM" not in out.read_text()

    def test_threads_match_single_threaded(self, tmp_path, source_file,
                                           corpus_file):
        out = tmp_path / "threaded.txt"
        assert main(["corpus", str(source_file), "-o", str(out),
                     "--threads", "4"]) == 0
        assert out.read_text() == corpus_file.read_text()


class TestConfigFile:
    def test_toml_config_applies(self, tmp_path, source_file):
        cfgfile = tmp_path / "cfg.toml"
        cfgfile.write_text('[abstraction]\nclasses = ["boundary"]\n')
        out = tmp_path / "boundary-only.txt"
        assert main(["corpus", str(source_file), "-o", str(out),
                     "--config", str(cfgfile)]) == 0
        # call words are not class-gated; everything else disappears
        assert set(out.read_text().split()) == {"$START", "$END",
                                                "opener", "closer"}

    def test_flags_override_config(self, tmp_path, corpus_file):
        cfgfile = tmp_path / "cfg.toml"
        cfgfile.write_text("[train]\ndim = 2\niterations = 1\nmin_count = 0\n")
        out = tmp_path / "v.txt"
        assert main(["train", "-i", str(corpus_file), "-o", str(out),
                     "--config", str(cfgfile), "--dim", "3"]) == 0
        first = out.read_text().splitlines()[0].split(" ")
        assert len(first) == 4  # word + 3 components

    def test_bad_toml_is_an_input_error(self, tmp_path, source_file):
        cfgfile = tmp_path / "cfg.toml"
        cfgfile.write_text("oops = [")
        assert main(["corpus", str(source_file), "-o",
                     str(tmp_path / "x.txt"), "--config", str(cfgfile)]) == 2


class TestExitCodes:
    def test_usage_error_is_1(self):
        assert main(["corpus"]) == 1

    def test_unknown_subcommand_is_1(self):
        assert main(["frobnicate"]) == 1

    def test_missing_input_is_2(self, tmp_path):
        assert main(["corpus", str(tmp_path / "absent.mc"),
                     "-o", str(tmp_path / "out.txt")]) == 2

    def test_parse_error_is_2(self, tmp_path):
        bad = tmp_path / "bad.mc"
        bad.write_text("int f( {")
        assert main(["corpus", str(bad), "-o", str(tmp_path / "out.txt")]) == 2

    def test_failed_command_leaves_no_partial_artifact(self, tmp_path):
        bad = tmp_path / "bad.mc"
        bad.write_text("int f( {")
        out = tmp_path / "out.txt"
        main(["corpus", str(bad), "-o", str(out)])
        assert not out.exists()

    def test_oov_query_is_2(self, vectors_file):
        assert main(["query", "--vectors", str(vectors_file),
                     "similar", "nosuchword"]) == 2
