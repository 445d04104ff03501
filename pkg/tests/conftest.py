from pathlib import Path

import pytest

from tracevec.abstraction import AbstractionConfig
from tracevec.frontend import parse_program
from tracevec.pipeline import corpus_from_traces, trace_programs

FIXTURES = Path(__file__).parent / "fixtures"


def sentences_for(source: str, cfg: AbstractionConfig | None = None):
    """Parse source text and run the whole pipeline to encoded sentences."""
    cfg = cfg if cfg is not None else AbstractionConfig()
    prog = parse_program(source, "<test>")
    traces = trace_programs([prog], cfg.path_budget)
    return corpus_from_traces(traces, cfg).sentences


@pytest.fixture(scope="session")
def golden_source() -> str:
    return (FIXTURES / "golden.mc").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_expected() -> list[list[str]]:
    text = (FIXTURES / "golden_expected.txt").read_text(encoding="utf-8")
    return [line.split() for line in text.splitlines() if line.strip()]


@pytest.fixture(scope="session")
def golden_corpus(golden_source):
    prog = parse_program(golden_source, "golden.mc")
    traces = trace_programs([prog])
    return corpus_from_traces(traces, AbstractionConfig(), config_id="golden")
