"""tracevec: word embeddings from abstracted symbolic traces of a
C-subset language.

Pipeline stages: parse (frontend), enumerate paths (symex), abstract
(abstraction), encode as words (encoding), persist and count (corpus),
train GloVe-style vectors (embedding), query (query), and benchmark
(bench).
"""

from .abstraction import AbstractionConfig, abstract_event, abstract_trace
from .corpus import Corpus, Vocabulary, build_vocabulary, read_corpus, write_corpus
from .embedding import (
    Embedding,
    TrainParams,
    build_cooccurrence,
    load_embedding,
    persist_embedding,
    train_embedding,
)
from .encoding import encode_token, encode_trace
from .frontend import Program, lower_to_cfg, parse_program, pretty_print
from .pipeline import build_corpus, corpus_from_traces, trace_programs
from .query import Subspace, averaged_query, cosine_similarity, nearest_neighbors, solve_analogy
from .symex import enumerate_paths, resolve_value, trace_procedure

__version__ = "0.1.0"

__all__ = [
    "AbstractionConfig",
    "abstract_event",
    "abstract_trace",
    "Corpus",
    "Vocabulary",
    "build_vocabulary",
    "read_corpus",
    "write_corpus",
    "Embedding",
    "TrainParams",
    "build_cooccurrence",
    "load_embedding",
    "persist_embedding",
    "train_embedding",
    "encode_token",
    "encode_trace",
    "Program",
    "lower_to_cfg",
    "parse_program",
    "pretty_print",
    "build_corpus",
    "corpus_from_traces",
    "trace_programs",
    "Subspace",
    "averaged_query",
    "cosine_similarity",
    "nearest_neighbors",
    "solve_analogy",
    "enumerate_paths",
    "resolve_value",
    "trace_procedure",
    "__version__",
]
