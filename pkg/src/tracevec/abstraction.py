"""Deduction rules turning trace events into abstract tokens.

Token classes can be toggled per configuration: dataflow (ParamTo /
ParamShare), retcmp (return-value comparisons), accesspath (stores and
assume-time reads), returns (RetError / RetConst / PropRet), error (the
Error marker), and boundary (FunctionStart / FunctionEnd).  Called is
always enabled.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources

from .symex import AssumeEv, CallEv, Const, RetOf, ReturnEv, StoreEv, Trace

__all__ = [
    "ALL_CLASSES",
    "AbstractToken",
    "AbstractionConfig",
    "AccessPathSensitive",
    "AccessPathStore",
    "Called",
    "DEFAULT_CONSTANTS",
    "ERROR",
    "Error",
    "FUNCTION_END",
    "FUNCTION_START",
    "FunctionEnd",
    "FunctionStart",
    "ParamShare",
    "ParamTo",
    "PropRet",
    "RetCmp",
    "RetConst",
    "RetError",
    "abstract_event",
    "abstract_trace",
    "default_error_table",
    "default_stop_words",
    "load_error_table",
]

ALL_CLASSES = frozenset({"dataflow", "retcmp", "accesspath", "returns", "error", "boundary"})

#: Constants eligible for return-comparison tokens.
DEFAULT_CONSTANTS = frozenset({-2, -1, 0, 1, 2, 3, 4, 8, 16, 32, 64})

_CMP_NAMES = {"==": "EQ", "!=": "NEQ", "<": "LT", "<=": "LTE", ">": "GT", ">=": "GTE"}


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Called:
    callee: str


@dataclass(frozen=True)
class ParamTo:
    later: str
    earlier: str


@dataclass(frozen=True)
class ParamShare:
    later: str
    earlier: str


@dataclass(frozen=True)
class RetCmp:
    op: str  # EQ NEQ LT LTE GT GTE
    callee: str
    constant: int


@dataclass(frozen=True)
class AccessPathStore:
    path: str


@dataclass(frozen=True)
class AccessPathSensitive:
    path: str


@dataclass(frozen=True)
class RetError:
    code: str


@dataclass(frozen=True)
class RetConst:
    constant: int


@dataclass(frozen=True)
class PropRet:
    callee: str


@dataclass(frozen=True)
class Error:
    pass


@dataclass(frozen=True)
class FunctionStart:
    pass


@dataclass(frozen=True)
class FunctionEnd:
    pass


ERROR = Error()
FUNCTION_START = FunctionStart()
FUNCTION_END = FunctionEnd()

AbstractToken = (Called | ParamTo | ParamShare | RetCmp | AccessPathStore
                 | AccessPathSensitive | RetError | RetConst | PropRet
                 | Error | FunctionStart | FunctionEnd)

_TOKEN_CLASS = {
    ParamTo: "dataflow",
    ParamShare: "dataflow",
    RetCmp: "retcmp",
    AccessPathStore: "accesspath",
    AccessPathSensitive: "accesspath",
    RetError: "returns",
    RetConst: "returns",
    PropRet: "returns",
    Error: "error",
    FunctionStart: "boundary",
    FunctionEnd: "boundary",
}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def load_error_table(path) -> dict[int, str]:
    """Read a two-column errno table (number <TAB> name)."""
    table: dict[int, str] = {}
    seen_names = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated columns")
            number, name = int(parts[0]), parts[1]
            if number <= 0:
                raise ValueError(f"{path}:{lineno}: error codes must be positive")
            if number in table or name in seen_names:
                raise ValueError(f"{path}:{lineno}: error table must be injective")
            table[number] = name
            seen_names.add(name)
    return table


def default_error_table() -> dict[int, str]:
    """The shipped errno table covering standard codes 1-34."""
    text = resources.files("tracevec.data").joinpath("errno.tsv").read_text(encoding="utf-8")
    table = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        number, name = line.split("\t")
        table[int(number)] = name
    return table


def default_stop_words() -> frozenset[str]:
    text = resources.files("tracevec.data").joinpath("stopwords.txt").read_text(encoding="utf-8")
    return frozenset(w for w in text.splitlines() if w and not w.startswith("#"))


@dataclass(frozen=True)
class AbstractionConfig:
    enabled_classes: frozenset[str] = ALL_CLASSES
    constants: frozenset[int] = DEFAULT_CONSTANTS
    err_codes: dict[int, str] = field(default_factory=default_error_table)
    path_budget: int = 5000
    stop_words: frozenset[str] = field(default_factory=default_stop_words)
    #: token kind names excluded beyond whole-class ablation; used by the
    #: syntactic configuration to keep AccessPathStore but not
    #: AccessPathSensitive
    excluded_tokens: frozenset[str] = frozenset()

    def __post_init__(self):
        unknown = self.enabled_classes - ALL_CLASSES
        if unknown:
            raise ValueError(f"unknown abstraction classes: {sorted(unknown)}")

    def allows(self, token: AbstractToken) -> bool:
        if type(token).__name__ in self.excluded_tokens:
            return False
        cls = _TOKEN_CLASS.get(type(token))
        return cls is None or cls in self.enabled_classes

    def without(self, *classes: str) -> "AbstractionConfig":
        return replace(self, enabled_classes=self.enabled_classes - frozenset(classes))


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

def _raw_tokens(ev) -> list[AbstractToken]:
    if isinstance(ev, CallEv):
        tokens: list[AbstractToken] = []
        tokens.extend(ParamTo(ev.callee, src) for src in ev.nested_sources)
        tokens.extend(ParamShare(ev.callee, prior) for prior in ev.shared_sources)
        tokens.append(Called(ev.callee))
        return tokens
    if isinstance(ev, AssumeEv):
        tokens = []
        if (isinstance(ev.subject, RetOf) and isinstance(ev.rhs, Const)
                and ev.op in _CMP_NAMES):
            tokens.append(RetCmp(_CMP_NAMES[ev.op], ev.subject.callee, ev.rhs.value))
        if ev.raw_path is not None and ev.raw_path.steps:
            tokens.append(AccessPathSensitive(ev.raw_path.render()))
        return tokens
    if isinstance(ev, StoreEv):
        return [AccessPathStore(ev.path.render())]
    if isinstance(ev, ReturnEv):
        value = ev.value
        if isinstance(value, Const):
            return [RetConst(value.value)]
        if isinstance(value, RetOf):
            tokens = [PropRet(value.callee)]
            if value.callee == "PTR_ERR":
                tokens.append(ERROR)
            return tokens
        return []
    return []


def abstract_event(ev, cfg: AbstractionConfig) -> list[AbstractToken]:
    """Apply the deduction rules to one event under a configuration.

    Return-token ordering here follows the rules themselves (RetError before
    Error); abstract_trace moves Error in front of the return token when
    assembling the trace.
    """
    tokens = _raw_tokens(ev)
    # The error-return rule needs the error table, so handle it here rather
    # than in _raw_tokens.
    if (isinstance(ev, ReturnEv) and isinstance(ev.value, Const)
            and ev.value.value < 0 and -ev.value.value in cfg.err_codes):
        tokens = [RetError(cfg.err_codes[-ev.value.value]), ERROR]
    kept = [t for t in tokens if cfg.allows(t)]
    # The constants restriction applies to the RetCmp family only.
    return [t for t in kept
            if not (isinstance(t, RetCmp) and t.constant not in cfg.constants)]


def abstract_trace(trace: Trace, cfg: AbstractionConfig) -> list[AbstractToken]:
    """Abstract a full trace, adding boundary tokens and placing Error
    before the return token it accompanies."""
    tokens: list[AbstractToken] = []
    if cfg.allows(FUNCTION_START):
        tokens.append(FUNCTION_START)
    for ev in trace.events:
        emitted = abstract_event(ev, cfg)
        if len(emitted) == 2 and isinstance(emitted[1], Error):
            emitted = [emitted[1], emitted[0]]
        tokens.extend(emitted)
    if cfg.allows(FUNCTION_END):
        tokens.append(FUNCTION_END)
    return tokens
