"""Weighted co-occurrence counts and GloVe-style vector training.

The trainer minimizes

    J = sum_{X[i,j] > 0} f(X[i,j]) * (w_i . c_j + b_i + b~_j - log X[i,j])^2

with f(x) = (x / x_max)^alpha for x < x_max, else 1, using per-parameter
adaptive-gradient (AdaGrad) updates over the nonzero entries in a fixed
order, which makes single-threaded training deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, Vocabulary

__all__ = [
    "CooccurrenceMatrix",
    "Embedding",
    "EmbeddingFormatError",
    "TrainParams",
    "TrainingDivergedError",
    "build_cooccurrence",
    "glove_gradients",
    "glove_loss",
    "load_embedding",
    "persist_embedding",
    "train_embedding",
]


class TrainingDivergedError(Exception):
    pass


class EmbeddingFormatError(Exception):
    pass


# ---------------------------------------------------------------------------
# Co-occurrence
# ---------------------------------------------------------------------------

@dataclass
class CooccurrenceMatrix:
    weights: dict[tuple[int, int], float]
    window: int
    vocab: Vocabulary

    def __len__(self):
        return len(self.weights)


def build_cooccurrence(corpus: Corpus, vocab: Vocabulary, window: int) -> CooccurrenceMatrix:
    """Sum reciprocal-distance weights over all in-window pairs.

    Out-of-vocabulary words keep their positions (they consume distance)
    but contribute no entries.  The result is exactly symmetric.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    weights: dict[tuple[int, int], float] = {}
    for sentence in corpus.sentences:
        ids = [vocab.word_to_id.get(w) for w in sentence]
        n = len(ids)
        for i in range(n):
            a = ids[i]
            if a is None:
                continue
            for j in range(i + 1, min(i + window + 1, n)):
                b = ids[j]
                if b is None:
                    continue
                w = 1.0 / (j - i)
                weights[(a, b)] = weights.get((a, b), 0.0) + w
                weights[(b, a)] = weights.get((b, a), 0.0) + w
    return CooccurrenceMatrix(weights, window, vocab)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainParams:
    dim: int = 300
    window: int = 50
    iterations: int = 2000
    learning_rate: float = 0.05
    x_max: float = 100.0
    alpha: float = 0.75
    seed: int = 1
    min_count: int = 1000

    def __post_init__(self):
        if self.dim < 1 or self.iterations < 1 or self.window < 1:
            raise ValueError("dim, window, and iterations must be >= 1")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        if self.learning_rate <= 0 or self.x_max <= 0:
            raise ValueError("learning_rate and x_max must be positive")
        if self.min_count < 0:
            raise ValueError("min_count must be >= 0")


@dataclass
class Embedding:
    words: list[str]
    w: np.ndarray   # main vectors, (V, dim)
    wc: np.ndarray  # context vectors, (V, dim)
    b: np.ndarray   # main biases, (V,)
    bc: np.ndarray  # context biases, (V,)
    loss_history: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.w.shape[1]

    def query_vectors(self) -> np.ndarray:
        return self.w + self.wc

    def query_vector(self, word: str) -> np.ndarray:
        return self.query_vectors()[self.words.index(word)]


def _weight(x: float, x_max: float, alpha: float) -> float:
    return (x / x_max) ** alpha if x < x_max else 1.0


def glove_loss(X: CooccurrenceMatrix, w, wc, b, bc, x_max=100.0, alpha=0.75) -> float:
    """The weighted least-squares objective; the finite-difference oracle in
    the tests differentiates this function directly."""
    total = 0.0
    for (i, j), x in X.weights.items():
        diff = float(w[i] @ wc[j]) + b[i] + bc[j] - math.log(x)
        total += _weight(x, x_max, alpha) * diff * diff
    return total


def glove_gradients(X: CooccurrenceMatrix, w, wc, b, bc, x_max=100.0, alpha=0.75):
    """Analytic gradient of glove_loss with respect to all parameters."""
    dw = np.zeros_like(w)
    dwc = np.zeros_like(wc)
    db = np.zeros_like(b)
    dbc = np.zeros_like(bc)
    for (i, j), x in X.weights.items():
        diff = float(w[i] @ wc[j]) + b[i] + bc[j] - math.log(x)
        g = 2.0 * _weight(x, x_max, alpha) * diff
        dw[i] += g * wc[j]
        dwc[j] += g * w[i]
        db[i] += g
        dbc[j] += g
    return dw, dwc, db, dbc


def _adagrad_kernel(w, wc, b, bc, gw, gwc, gb, gbc, rows, cols, logx, fx,
                    lr, iterations, losses):
    n = rows.shape[0]
    dim = w.shape[1]
    for it in range(iterations):
        total = 0.0
        for k in range(n):
            i = rows[k]
            j = cols[k]
            dot = 0.0
            for t in range(dim):
                dot += w[i, t] * wc[j, t]
            diff = dot + b[i] + bc[j] - logx[k]
            total += fx[k] * diff * diff
            g = 2.0 * fx[k] * diff
            for t in range(dim):
                grad_w = g * wc[j, t]
                grad_c = g * w[i, t]
                gw[i, t] += grad_w * grad_w
                gwc[j, t] += grad_c * grad_c
                w[i, t] -= lr * grad_w / math.sqrt(gw[i, t])
                wc[j, t] -= lr * grad_c / math.sqrt(gwc[j, t])
            gb[i] += g * g
            gbc[j] += g * g
            b[i] -= lr * g / math.sqrt(gb[i])
            bc[j] -= lr * g / math.sqrt(gbc[j])
        losses[it] = total
        if not math.isfinite(total):
            return it
    return -1


try:  # numba speeds up the inner loop ~100x; the pure-Python path is identical
    from numba import njit

    _adagrad_kernel_fast = njit(cache=True)(_adagrad_kernel)
except ImportError:  # pragma: no cover
    _adagrad_kernel_fast = _adagrad_kernel


def train_embedding(X: CooccurrenceMatrix, params: TrainParams) -> Embedding:
    """Train vectors on the nonzero co-occurrence entries.

    Deterministic for a fixed seed: initialization comes from a seeded
    generator and entries are visited in sorted order every iteration.
    """
    if not X.weights:
        raise ValueError("co-occurrence matrix is empty")
    vocab_size = len(X.vocab)
    dim = params.dim
    rng = np.random.default_rng(params.seed)
    scale = 0.5 / dim

    def init(shape):
        return rng.uniform(-scale, scale, size=shape)

    w = init((vocab_size, dim))
    wc = init((vocab_size, dim))
    b = init(vocab_size)
    bc = init(vocab_size)
    gw = np.ones_like(w)
    gwc = np.ones_like(wc)
    gb = np.ones_like(b)
    gbc = np.ones_like(bc)

    entries = sorted(X.weights.items())
    rows = np.array([i for (i, _), _ in entries], dtype=np.int64)
    cols = np.array([j for (_, j), _ in entries], dtype=np.int64)
    xs = np.array([x for _, x in entries], dtype=np.float64)
    logx = np.log(xs)
    fx = np.array([_weight(x, params.x_max, params.alpha) for x in xs])

    losses = np.zeros(params.iterations)
    bad = _adagrad_kernel_fast(w, wc, b, bc, gw, gwc, gb, gbc, rows, cols,
                               logx, fx, params.learning_rate,
                               params.iterations, losses)
    if bad >= 0:
        raise TrainingDivergedError(
            f"non-finite loss at iteration {bad}; lower the learning rate")
    return Embedding(list(X.vocab.id_to_word), w, wc, b, bc, losses)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def persist_embedding(emb: Embedding, destination):
    """Write query vectors (w + w~) as text, one word per line, and a
    sidecar .raw.npz with the raw parameters for exact resumption."""
    q = emb.query_vectors()
    with open(destination, "w", encoding="utf-8") as fh:
        for idx, word in enumerate(emb.words):
            fh.write(word + " " + " ".join(f"{v:.17g}" for v in q[idx]) + "\n")
    np.savez(str(destination) + ".raw.npz",
             words=np.array(emb.words), w=emb.w, wc=emb.wc, b=emb.b, bc=emb.bc)


def load_embedding(source) -> Embedding:
    """Load an embedding saved by persist_embedding.

    Falls back to query vectors alone (zero context half and biases) when
    the sidecar is missing.
    """
    words = []
    vectors = []
    dim = None
    with open(source, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                raise EmbeddingFormatError(f"line {lineno}: expected word and vector")
            word = parts[0]
            if word in words:
                raise EmbeddingFormatError(f"line {lineno}: duplicate word {word!r}")
            values = [float(v) for v in parts[1:]]
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise EmbeddingFormatError(
                    f"line {lineno}: expected {dim} columns, found {len(values)}")
            words.append(word)
            vectors.append(values)
    if not words:
        raise EmbeddingFormatError("empty embedding file")
    q = np.array(vectors)
    sidecar = str(source) + ".raw.npz"
    try:
        raw = np.load(sidecar, allow_pickle=False)
    except OSError:
        zeros = np.zeros_like(q)
        return Embedding(words, q, zeros, np.zeros(len(words)), np.zeros(len(words)))
    if list(raw["words"]) != words:
        raise EmbeddingFormatError("sidecar word list disagrees with the text file")
    return Embedding(words, raw["w"], raw["wc"], raw["b"], raw["bc"])
