"""Similarity, nearest-neighbor, analogy and averaged-vector queries.

All queries run over an immutable Embedding's query vectors (w + w~).
Zero-norm vectors have cosine similarity 0 by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import Embedding

__all__ = [
    "OOVError",
    "Subspace",
    "averaged_query",
    "cosine_similarity",
    "nearest_neighbors",
    "solve_analogy",
]


class OOVError(Exception):
    """A query word is absent from the vocabulary."""

    def __init__(self, word):
        super().__init__(f"out-of-vocabulary word: {word!r}")
        self.word = word


@dataclass(frozen=True)
class Subspace:
    """Candidate restriction: an explicit word list or a trailing-star
    prefix pattern such as $RET_E*."""

    words: frozenset[str] | None = None
    prefix: str | None = None

    @classmethod
    def from_pattern(cls, pattern: str) -> "Subspace":
        if pattern.endswith("*"):
            return cls(prefix=pattern[:-1])
        return cls(words=frozenset({pattern}))

    @classmethod
    def from_words(cls, words) -> "Subspace":
        return cls(words=frozenset(words))

    def matches(self, word: str) -> bool:
        if self.words is not None:
            return word in self.words
        return word.startswith(self.prefix)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b / (na * nb))


def _unit_rows(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return m / safe


def _similarities(emb: Embedding, target: np.ndarray) -> np.ndarray:
    q = _unit_rows(emb.query_vectors())
    norm = np.linalg.norm(target)
    if norm == 0.0:
        return np.zeros(len(emb.words))
    return q @ (target / norm)


def nearest_neighbors(emb: Embedding, target: np.ndarray, k: int,
                      sub: Subspace | None = None,
                      exclude=()) -> list[tuple[str, float]]:
    """Top-k candidates by descending similarity, ties by ascending word id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    exclude = set(exclude)
    candidates = [i for i, w in enumerate(emb.words)
                  if w not in exclude and (sub is None or sub.matches(w))]
    if not candidates:
        raise ValueError("no candidate words match the subspace")
    sims = _similarities(emb, np.asarray(target, dtype=float))
    ranked = sorted(candidates, key=lambda i: (-sims[i], i))
    return [(emb.words[i], float(sims[i])) for i in ranked[:k]]


def solve_analogy(emb: Embedding, a: str, b: str, c: str) -> str:
    """3CosAdd: argmax over d not in {a, b, c} of
    cos(d, b) - cos(d, a) + cos(d, c)."""
    index = {w: i for i, w in enumerate(emb.words)}
    for word in (a, b, c):
        if word not in index:
            raise OOVError(word)
    q = emb.query_vectors()
    qn = _unit_rows(q)
    score = np.zeros(len(emb.words))
    for word, sign in ((b, 1.0), (a, -1.0), (c, 1.0)):
        v = q[index[word]]
        norm = np.linalg.norm(v)
        if norm != 0.0:
            score += sign * (qn @ (v / norm))
    for word in (a, b, c):
        score[index[word]] = -np.inf
    if np.all(np.isneginf(score)):
        raise ValueError("vocabulary holds no candidate besides the query words")
    return emb.words[int(np.argmax(score))]  # argmax takes the lowest id on ties


def averaged_query(emb: Embedding, words, sub: Subspace, k: int) -> list[tuple[str, float]]:
    """Nearest neighbors of the mean query vector, excluding the inputs."""
    if not words:
        raise ValueError("need at least one word to average")
    index = {w: i for i, w in enumerate(emb.words)}
    for word in words:
        if word not in index:
            raise OOVError(word)
    q = emb.query_vectors()
    target = np.mean([q[index[w]] for w in words], axis=0)
    return nearest_neighbors(emb, target, k, sub, exclude=set(words))
