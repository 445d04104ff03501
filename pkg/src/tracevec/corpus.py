"""Sentence corpora on disk plus frequency-filtered vocabularies."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

__all__ = [
    "Corpus",
    "CorpusFormatError",
    "EmptyVocabularyError",
    "Vocabulary",
    "build_vocabulary",
    "read_corpus",
    "write_corpus",
    "write_vocabulary",
]


class CorpusFormatError(Exception):
    pass


class EmptyVocabularyError(Exception):
    pass


@dataclass
class Corpus:
    sentences: list[list[str]]
    config_id: str = ""
    source_names: tuple[str, ...] = ()


def write_corpus(corpus: Corpus, destination):
    """One sentence per line, single-space separated."""
    with open(destination, "w", encoding="utf-8") as fh:
        for lineno, sentence in enumerate(corpus.sentences, 1):
            for word in sentence:
                if not word or any(c.isspace() for c in word):
                    raise CorpusFormatError(
                        f"line {lineno}: word {word!r} contains whitespace or is empty")
            fh.write(" ".join(sentence))
            fh.write("\n")


def read_corpus(source) -> Corpus:
    sentences = []
    with open(source, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if line == "":
                sentences.append([])
                continue
            words = line.split(" ")
            for word in words:
                if not word or any(c.isspace() for c in word):
                    raise CorpusFormatError(f"line {lineno}: malformed word {word!r}")
            sentences.append(words)
    return Corpus(sentences, source_names=(str(source),))


@dataclass
class Vocabulary:
    word_to_id: dict[str, int]
    id_to_word: list[str]
    counts: dict[str, int]
    min_count: int

    def __len__(self):
        return len(self.id_to_word)

    def __contains__(self, word):
        return word in self.word_to_id


def build_vocabulary(corpus: Corpus, min_count: int = 0) -> Vocabulary:
    """Retain words occurring at least min_count times.

    Ids are dense and assigned by descending count, ties broken
    lexicographically, so assignment is stable across runs.
    """
    if min_count < 0:
        raise ValueError("min_count must be >= 0")
    counts = Counter()
    for sentence in corpus.sentences:
        counts.update(sentence)
    retained = sorted((w for w, c in counts.items() if c >= min_count),
                      key=lambda w: (-counts[w], w))
    if not retained:
        raise EmptyVocabularyError(
            f"no word occurs at least {min_count} times; nothing to train on")
    word_to_id = {w: i for i, w in enumerate(retained)}
    return Vocabulary(word_to_id, retained, {w: counts[w] for w in retained}, min_count)


def write_vocabulary(vocab: Vocabulary, destination):
    """Dump word/count pairs as TSV for inspection."""
    with open(destination, "w", encoding="utf-8") as fh:
        for word in vocab.id_to_word:
            fh.write(f"{word}\t{vocab.counts[word]}\n")
