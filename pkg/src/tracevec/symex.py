"""Path enumeration with a lightweight symbolic state.

The enumerator walks an acyclic Cfg depth-first (true branch before false),
maintaining a symbolic environment but no memory model and performing no
feasibility checking.  Each completed path becomes a Trace of events.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .frontend import (
    AccessPath,
    Assign,
    Call,
    Cfg,
    Cmp,
    ExprStmt,
    IntConst,
    LogicalAnd,
    LogicalOr,
    Neg,
    Not,
    PathRead,
    Procedure,
    Return,
    Var,
    lower_to_cfg,
)

__all__ = [
    "AssumeEv",
    "CallEv",
    "Const",
    "Path",
    "RetOf",
    "ReturnEv",
    "StoreEv",
    "SymbolicState",
    "Trace",
    "UNKNOWN",
    "Unknown",
    "DEFAULT_PATH_BUDGET",
    "enumerate_paths",
    "resolve_value",
    "trace_procedure",
    "format_trace",
    "parse_trace_dump",
]

#: Default cap on the number of paths explored per procedure.
DEFAULT_PATH_BUDGET = 5000


# ---------------------------------------------------------------------------
# Symbolic values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class RetOf:
    callee: str


@dataclass(frozen=True)
class Path:
    path: AccessPath


@dataclass(frozen=True)
class Unknown:
    pass


UNKNOWN = Unknown()

SymbolicValue = Const | RetOf | Path | Unknown


@dataclass
class SymbolicState:
    """Per-path environment plus argument-sharing history.

    passed_to maps a variable to the ordered list of callees its current
    value has been passed to; reassignment clears the entry.
    """

    env: dict[str, SymbolicValue] = field(default_factory=dict)
    passed_to: dict[str, list[str]] = field(default_factory=dict)

    def copy(self) -> "SymbolicState":
        return SymbolicState(dict(self.env), {k: list(v) for k, v in self.passed_to.items()})

    def bind(self, name: str, value: SymbolicValue):
        self.env[name] = value
        self.passed_to.pop(name, None)


# ---------------------------------------------------------------------------
# Trace events
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CallEv:
    callee: str
    args: tuple[SymbolicValue, ...]
    #: callees whose return values flow into the arguments (directly nested
    #: or through a variable binding)
    nested_sources: tuple[str, ...]
    #: callees a variable argument was previously passed to, deduplicated
    shared_sources: tuple[str, ...] = ()


@dataclass(frozen=True)
class AssumeEv:
    subject: SymbolicValue
    op: str  # effective operator: already flipped for false-polarity edges
    rhs: SymbolicValue
    polarity: bool  # matches the branch-edge label
    raw_path: AccessPath | None = None


@dataclass(frozen=True)
class StoreEv:
    path: AccessPath
    value: SymbolicValue


@dataclass(frozen=True)
class ReturnEv:
    value: SymbolicValue | None


TraceEvent = CallEv | AssumeEv | StoreEv | ReturnEv


@dataclass(frozen=True)
class Trace:
    proc_name: str
    events: tuple[TraceEvent, ...]


# ---------------------------------------------------------------------------
# Value resolution
# ---------------------------------------------------------------------------

def resolve_value(state: SymbolicState, expr) -> SymbolicValue:
    """Pure transfer function from expressions to symbolic values.

    Calls map to RetOf without recording an event; event emission is the
    enumerator's job.
    """
    if isinstance(expr, IntConst):
        return Const(expr.value)
    if isinstance(expr, Neg):
        inner = resolve_value(state, expr.operand)
        if isinstance(inner, Const):
            return Const(-inner.value)
        return UNKNOWN
    if isinstance(expr, Var):
        return state.env.get(expr.name, UNKNOWN)
    if isinstance(expr, Call):
        return RetOf(expr.callee)
    if isinstance(expr, PathRead):
        return Path(expr.path)
    return UNKNOWN  # comparisons and anything else


_MIRROR = {"==": "==", "!=": "!=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}
_NEGATE = {"==": "!=", "!=": "==", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


class _PathRunner:
    """Evaluates expressions with side effects along one path."""

    def __init__(self, state: SymbolicState, events: list):
        self.state = state
        self.events = events

    def eval(self, expr) -> SymbolicValue:
        if isinstance(expr, Call):
            arg_values = []
            var_args = []
            for a in expr.args:
                arg_values.append(self.eval(a))
                if isinstance(a, Var):
                    var_args.append(a.name)
            nested = tuple(v.callee for v in arg_values if isinstance(v, RetOf))
            shared = []
            for name in var_args:
                for prior in self.state.passed_to.get(name, ()):
                    if prior not in shared:
                        shared.append(prior)
            self.events.append(CallEv(expr.callee, tuple(arg_values), nested, tuple(shared)))
            for name in var_args:
                history = self.state.passed_to.setdefault(name, [])
                if expr.callee not in history:
                    history.append(expr.callee)
            return RetOf(expr.callee)
        if isinstance(expr, Neg):
            inner = self.eval(expr.operand)
            if isinstance(inner, Const):
                return Const(-inner.value)
            return UNKNOWN
        if isinstance(expr, Cmp):
            self.eval(expr.lhs)
            self.eval(expr.rhs)
            return UNKNOWN
        return resolve_value(self.state, expr)

    def run_stmt(self, stmt):
        if isinstance(stmt, Assign):
            value = self.eval(stmt.rhs)
            if isinstance(stmt.target, AccessPath):
                # No memory model: record the store, leave env untouched.
                self.events.append(StoreEv(stmt.target, value))
            else:
                self.state.bind(stmt.target.name, value)
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.expr)
        elif isinstance(stmt, Return):
            value = self.eval(stmt.value) if stmt.value is not None else None
            self.events.append(ReturnEv(value))
        else:
            raise TypeError(f"unexpected statement in basic block: {stmt!r}")

    def run_assume(self, cond, polarity: bool):
        """Emit assume events for a branch condition.

        Compound conditions appear only on loop-truncation edges; operands
        are then assumed with the same polarity (no feasibility checking, so
        the disjunctive structure of the negation is not tracked).
        """
        if isinstance(cond, (LogicalAnd, LogicalOr)):
            self.run_assume(cond.lhs, polarity)
            self.run_assume(cond.rhs, polarity)
            return
        if isinstance(cond, Not):
            self.run_assume(cond.operand, not polarity)
            return
        if isinstance(cond, Cmp):
            lv = self.eval(cond.lhs)
            rv = self.eval(cond.rhs)
            op = cond.op
            subject, rhs = lv, rv
            if not isinstance(lv, (RetOf, Path)) and isinstance(rv, (RetOf, Path)):
                subject, rhs = rv, lv
                op = _MIRROR[op]
            if not polarity:
                op = _NEGATE[op]
            raw = None
            if isinstance(cond.lhs, PathRead):
                raw = cond.lhs.path
            elif isinstance(cond.rhs, PathRead):
                raw = cond.rhs.path
            self.events.append(AssumeEv(subject, op, rhs, polarity, raw))
            return
        # Truth test: if (e) means e != 0 on the true branch.
        value = self.eval(cond)
        op = "!=" if polarity else "=="
        raw = cond.path if isinstance(cond, PathRead) else None
        self.events.append(AssumeEv(value, op, Const(0), polarity, raw))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_paths(cfg: Cfg, budget: int = DEFAULT_PATH_BUDGET,
                    proc_name: str = "<anonymous>") -> list[Trace]:
    """Enumerate entry-to-return paths depth-first, true-edge first.

    Emits at most `budget` traces; no satisfiability pruning is performed.
    """
    if budget < 1:
        raise ValueError("path budget must be >= 1")
    out_edges = {blk.id: [] for blk in cfg.blocks}
    for e in cfg.edges:
        out_edges[e.src].append(e)

    traces: list[Trace] = []

    def walk(block_id: int, state: SymbolicState, events: list):
        if len(traces) >= budget:
            return
        runner = _PathRunner(state, events)
        for stmt in cfg.blocks[block_id].stmts:
            runner.run_stmt(stmt)
            if isinstance(stmt, Return):
                traces.append(Trace(proc_name, tuple(events)))
                return
        succ = out_edges[block_id]
        if not succ:
            # Defensive: lower_to_cfg guarantees a Return on every maximal
            # path, but an isolated block still terminates cleanly.
            events.append(ReturnEv(None))
            traces.append(Trace(proc_name, tuple(events)))
            return
        if len(succ) == 1 and succ[0].cond is None:
            walk(succ[0].dst, state, events)
            return
        for edge in succ:
            if len(traces) >= budget:
                return
            branch_state = state.copy()
            branch_events = list(events)
            if edge.cond is not None:
                _PathRunner(branch_state, branch_events).run_assume(edge.cond, edge.polarity)
            walk(edge.dst, branch_state, branch_events)

    walk(cfg.entry, SymbolicState(), [])
    return traces


def trace_procedure(proc: Procedure, budget: int = DEFAULT_PATH_BUDGET) -> list[Trace]:
    """Lower a procedure and enumerate its paths."""
    return enumerate_paths(lower_to_cfg(proc), budget, proc.name)


# ---------------------------------------------------------------------------
# Debug dump (docs/trace-format.md)
# ---------------------------------------------------------------------------

def _fmt_value(v: SymbolicValue | None) -> str:
    if v is None:
        return "void"
    if isinstance(v, Const):
        return f"const:{v.value}"
    if isinstance(v, RetOf):
        return f"ret:{v.callee}"
    if isinstance(v, Path):
        return f"path:{v.path.render()}"
    return "unknown"


def format_trace(trace: Trace) -> str:
    """One tab-separated line per event; a debugging surface."""
    lines = [f"trace\t{trace.proc_name}"]
    for ev in trace.events:
        if isinstance(ev, CallEv):
            lines.append("call\t{}\t{}\t{}\t{}".format(
                ev.callee,
                ",".join(_fmt_value(a) for a in ev.args),
                ",".join(ev.nested_sources),
                ",".join(ev.shared_sources)))
        elif isinstance(ev, AssumeEv):
            lines.append("assume\t{}\t{}\t{}\t{}\t{}".format(
                _fmt_value(ev.subject), ev.op, _fmt_value(ev.rhs),
                "T" if ev.polarity else "F",
                ev.raw_path.render() if ev.raw_path else ""))
        elif isinstance(ev, StoreEv):
            lines.append(f"store\t{ev.path.render()}\t{_fmt_value(ev.value)}")
        elif isinstance(ev, ReturnEv):
            lines.append(f"return\t{_fmt_value(ev.value)}")
    return "\n".join(lines)


def _parse_path(text: str) -> AccessPath:
    steps = []
    rest = text
    while rest:
        sel = "->" if rest.startswith("->") else "."
        rest = rest[len(sel):]
        cut = len(rest)
        for probe in ("->", "."):
            pos = rest.find(probe)
            if pos > 0:
                cut = min(cut, pos)
        steps.append((sel, rest[:cut]))
        rest = rest[cut:]
    return AccessPath("_", tuple(steps))


def _parse_value(text: str) -> SymbolicValue | None:
    if text == "void":
        return None
    if text == "unknown":
        return UNKNOWN
    kind, _, payload = text.partition(":")
    if kind == "const":
        return Const(int(payload))
    if kind == "ret":
        return RetOf(payload)
    if kind == "path":
        return Path(_parse_path(payload))
    raise ValueError(f"bad symbolic value {text!r}")


def parse_trace_dump(lines) -> list[Trace]:
    """Inverse of format_trace for a stream of dumped traces."""
    traces: list[Trace] = []
    name = None
    events: list[TraceEvent] = []

    def flush():
        if name is not None:
            traces.append(Trace(name, tuple(events)))

    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        try:
            if fields[0] == "trace":
                flush()
                name = fields[1]
                events = []
            elif fields[0] == "call":
                _, callee, args, nested, shared = fields
                events.append(CallEv(
                    callee,
                    tuple(_parse_value(a) for a in args.split(",") if a),
                    tuple(s for s in nested.split(",") if s),
                    tuple(s for s in shared.split(",") if s)))
            elif fields[0] == "assume":
                _, subj, op, rhs, pol, raw = fields
                events.append(AssumeEv(
                    _parse_value(subj), op, _parse_value(rhs), pol == "T",
                    _parse_path(raw) if raw else None))
            elif fields[0] == "store":
                events.append(StoreEv(_parse_path(fields[1]), _parse_value(fields[2])))
            elif fields[0] == "return":
                events.append(ReturnEv(_parse_value(fields[1])))
            else:
                raise ValueError(f"unknown event kind {fields[0]!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"trace dump line {lineno}: {exc}") from exc
    flush()
    return traces
