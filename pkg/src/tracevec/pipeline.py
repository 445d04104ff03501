"""Glue from source programs to sentence corpora.

Traces depend only on the path budget, so they can be generated once and
re-abstracted under many configurations (the ablation runner relies on
this).
"""

from __future__ import annotations

from .abstraction import AbstractionConfig, abstract_trace
from .corpus import Corpus
from .encoding import encode_trace
from .frontend import Program, lower_to_cfg
from .symex import Trace, enumerate_paths

__all__ = ["build_corpus", "corpus_from_traces", "trace_programs"]


def trace_programs(programs: list[Program], budget: int = 5000) -> list[Trace]:
    """All traces, procedures in source order, paths in enumeration order."""
    traces = []
    for program in programs:
        for proc in program.procedures:
            traces.extend(enumerate_paths(lower_to_cfg(proc), budget, proc.name))
    return traces


def corpus_from_traces(traces: list[Trace], cfg: AbstractionConfig,
                       config_id: str = "", source_names=()) -> Corpus:
    sentences = [encode_trace(abstract_trace(t, cfg), cfg) for t in traces]
    return Corpus(sentences, config_id, tuple(source_names))


def build_corpus(programs: list[Program], cfg: AbstractionConfig,
                 config_id: str = "") -> Corpus:
    traces = trace_programs(programs, cfg.path_budget)
    names = tuple(p.source_name for p in programs)
    return corpus_from_traces(traces, cfg, config_id, names)
