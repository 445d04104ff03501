import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracevec.corpus import (
    Corpus,
    CorpusFormatError,
    EmptyVocabularyError,
    build_vocabulary,
    read_corpus,
    write_corpus,
    write_vocabulary,
)


class TestCorpusIO:
    def test_round_trip(self, tmp_path):
        corpus = Corpus([["a", "b"], [], ["$RET_-1"]])
        path = tmp_path / "corpus.txt"
        write_corpus(corpus, path)
        assert read_corpus(path).sentences == corpus.sentences

    def test_one_sentence_per_line(self, tmp_path):
        path = tmp_path / "corpus.txt"
        write_corpus(Corpus([["x", "y"], ["z"]]), path)
        assert path.read_text() == "x y\nz\n"

    def test_empty_line_is_an_empty_sentence(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("a\n\nb\n")
        assert read_corpus(path).sentences == [["a"], [], ["b"]]

    def test_whitespace_in_word_rejected_with_line_number(self, tmp_path):
        corpus = Corpus([["ok"], ["bad word" "\t"]])
        path = tmp_path / "corpus.txt"
        with pytest.raises(CorpusFormatError) as exc:
            write_corpus(corpus, path)
        assert "2" in str(exc.value)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.lists(
        st.from_regex(r"[!-~]+", fullmatch=True), max_size=6), max_size=8))
    def test_property_round_trip(self, tmp_path_factory, sentences):
        path = tmp_path_factory.mktemp("c") / "corpus.txt"
        write_corpus(Corpus(sentences), path)
        assert read_corpus(path).sentences == sentences


class TestVocabulary:
    def test_ids_ordered_by_count_then_word(self):
        corpus = Corpus([["b", "b", "a", "a", "c", "c", "c", "d"]])
        vocab = build_vocabulary(corpus)
        assert vocab.id_to_word == ["c", "a", "b", "d"]
        assert vocab.word_to_id == {"c": 0, "a": 1, "b": 2, "d": 3}

    def test_min_count_filters(self):
        corpus = Corpus([["a"] * 5 + ["b"] * 2])
        vocab = build_vocabulary(corpus, min_count=3)
        assert vocab.id_to_word == ["a"]
        assert vocab.counts == {"a": 5}

    def test_all_filtered_raises(self):
        with pytest.raises(EmptyVocabularyError):
            build_vocabulary(Corpus([["a"]]), min_count=2)

    def test_write_vocabulary(self, tmp_path):
        vocab = build_vocabulary(Corpus([["a", "a", "b"]]))
        path = tmp_path / "vocab.tsv"
        write_vocabulary(vocab, path)
        assert path.read_text() == "a\t2\nb\t1\n"
