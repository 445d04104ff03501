"""Frontend for the C-subset language: parsing, pretty-printing, CFG lowering.

The accepted grammar is documented in docs/grammar.md.  Types parse but carry
no semantics; the IR below is untyped.  After lowering, every procedure body
is an acyclic control-flow graph in which each loop body executes zero or one
time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "AccessPath",
    "Assign",
    "BasicBlock",
    "Call",
    "Cfg",
    "Cmp",
    "Edge",
    "Expr",
    "ExprStmt",
    "If",
    "IntConst",
    "LogicalAnd",
    "LogicalOr",
    "Neg",
    "Not",
    "ParseError",
    "PathRead",
    "Procedure",
    "Program",
    "Return",
    "Stmt",
    "Var",
    "While",
    "lower_to_cfg",
    "parse_program",
    "pretty_print",
    "topo_order",
]


class ParseError(Exception):
    """Syntax error with source position."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AccessPath:
    """Field-selector chain from a base variable, e.g. obj->foo.bar.

    The rendered text omits the base: "->foo.bar".
    """

    base: str
    steps: tuple[tuple[str, str], ...]  # (selector in {"->", "."}, field)

    def render(self) -> str:
        return "".join(sel + fld for sel, fld in self.steps)


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class PathRead:
    path: AccessPath


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Cmp:
    op: str  # one of == != < <= > >=
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class LogicalAnd:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class LogicalOr:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


Expr = IntConst | Var | Call | PathRead | Neg | Cmp | LogicalAnd | LogicalOr | Not


@dataclass(frozen=True)
class Assign:
    target: Var | AccessPath
    rhs: Expr


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    els: tuple["Stmt", ...]


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class Return:
    value: Expr | None


Stmt = Assign | ExprStmt | If | While | Return


@dataclass(frozen=True)
class Procedure:
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class Program:
    procedures: tuple[Procedure, ...]
    source_name: str = "<string>"


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]*|/\*.*?\*/)
    | (?P<int>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>->|==|!=|<=|>=|&&|\|\||[-!<>=(){};,.*&])
    """,
    re.VERBOSE | re.DOTALL,
)

KEYWORDS = {"if", "else", "while", "for", "return", "struct", "union", "void"}


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", or the punctuation itself
    text: str
    line: int
    col: int


def _lex(source: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group(0)
        col = pos - line_start + 1
        if m.lastgroup == "int":
            tokens.append(Token("int", text, line, col))
        elif m.lastgroup == "ident":
            tokens.append(Token("ident", text, line, col))
        elif m.lastgroup == "punct":
            tokens.append(Token(text, text, line, col))
        # whitespace / comments advance position only
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead=0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.advance()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = what or f"'{kind}'"
            got = "end of input" if tok.kind == "eof" else f"'{tok.text}'"
            raise ParseError(f"expected {want}, found {got}", tok.line, tok.col)
        return self.advance()

    def error(self, message) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # -- grammar ------------------------------------------------------------

    def program(self, source_name) -> Program:
        procs = []
        seen = {}
        while not self.at("eof"):
            proc = self.procedure()
            if proc.name in seen:
                raise self.error(f"duplicate procedure name {proc.name!r}")
            seen[proc.name] = proc
            procs.append(proc)
        return Program(tuple(procs), source_name)

    def type_tokens(self):
        """Consume a type: optional struct/union tag, identifier, stars."""
        if self.at("struct") or self.at("union"):
            self.advance()
            self.expect("ident", "type name")
        elif self.at("void") or self.at("ident"):
            self.advance()
        else:
            raise self.error(f"expected type, found '{self.peek().text}'")
        while self.accept("*"):
            pass

    def procedure(self) -> Procedure:
        self.type_tokens()
        name = self.expect("ident", "procedure name").text
        self.expect("(")
        params = []
        if not self.at(")"):
            if self.at("void") and self.peek(1).kind == ")":
                self.advance()  # int f(void)
            else:
                params.append(self.param())
                while self.accept(","):
                    params.append(self.param())
        self.expect(")")
        body = self.block()
        return Procedure(name, tuple(params), body)

    def param(self) -> str:
        # A parameter is a run of type tokens ending in the parameter name.
        names = []
        while True:
            if self.at("struct") or self.at("union") or self.at("void"):
                self.advance()
                continue
            if self.accept("*"):
                names = []  # stars separate the type from the name
                continue
            tok = self.expect("ident", "parameter name")
            names.append(tok.text)
            if self.at(",") or self.at(")"):
                return names[-1]

    def block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.at("eof"):
                raise self.error("expected '}', found end of input")
            stmts.extend(self.statement())
        self.expect("}")
        return tuple(stmts)

    def block_or_stmt(self) -> tuple[Stmt, ...]:
        if self.at("{"):
            return self.block()
        return tuple(self.statement())

    def statement(self) -> list[Stmt]:
        tok = self.peek()
        if tok.kind == ";":
            self.advance()
            return []
        if tok.kind == "ident" and tok.text == "if":
            return [self.if_statement()]
        if tok.kind == "ident" and tok.text == "while":
            return [self.while_statement()]
        if tok.kind == "ident" and tok.text == "for":
            return self.for_statement()
        if tok.kind == "ident" and tok.text == "return":
            self.advance()
            value = None
            if not self.at(";"):
                value = self.expression()
            self.expect(";")
            return [Return(value)]
        if self._looks_like_declaration():
            return self.declaration()
        stmt = self.simple_statement()
        self.expect(";")
        return [stmt] if stmt is not None else []

    def _looks_like_declaration(self) -> bool:
        tok = self.peek()
        if tok.kind in ("struct", "union", "void"):
            return True
        if tok.kind != "ident":
            return False
        # "ident ident" or "ident * ident" patterns open a declaration;
        # there is no multiplication in the grammar, so '*' is unambiguous.
        i = 1
        while self.peek(i).kind == "*":
            i += 1
        return self.peek(i).kind == "ident" and (i > 1 or self.peek(1).kind == "ident")

    def declaration(self) -> list[Stmt]:
        self.type_tokens()
        name = self.expect("ident", "declared name").text
        if self.accept("="):
            rhs = self.expression()
            self.expect(";")
            return [Assign(Var(name), rhs)]
        self.expect(";")
        return []  # bare declarations carry no semantics

    def simple_statement(self) -> Stmt | None:
        """Assignment or expression statement, without the trailing ';'."""
        if self.at("ident"):
            save = self.pos
            name = self.advance().text
            steps = self._path_steps()
            if self.accept("="):
                rhs = self.expression()
                if steps:
                    return Assign(AccessPath(name, steps), rhs)
                return Assign(Var(name), rhs)
            self.pos = save
        expr = self.expression()
        return ExprStmt(expr)

    def _path_steps(self) -> tuple[tuple[str, str], ...]:
        steps = []
        while self.at("->") or self.at("."):
            sel = self.advance().text
            fld = self.expect("ident", "field name").text
            steps.append((sel, fld))
        return tuple(steps)

    def if_statement(self) -> If:
        self.advance()  # 'if'
        self.expect("(")
        cond = self.condition()
        self.expect(")")
        then = self.block_or_stmt()
        els: tuple[Stmt, ...] = ()
        if self.at("ident") and self.peek().text == "else":
            self.advance()
            if self.at("ident") and self.peek().text == "if":
                els = (self.if_statement(),)
            else:
                els = self.block_or_stmt()
        return If(cond, then, els)

    def while_statement(self) -> While:
        self.advance()  # 'while'
        self.expect("(")
        cond = self.condition()
        self.expect(")")
        body = self.block_or_stmt()
        return While(cond, body)

    def for_statement(self) -> list[Stmt]:
        # for(init; cond; step) desugars to init; while(cond) { body; step }
        self.advance()  # 'for'
        self.expect("(")
        init: list[Stmt] = []
        if not self.at(";"):
            if self._looks_like_declaration():
                init = self.declaration()
                # declaration consumed its ';'
            else:
                stmt = self.simple_statement()
                if stmt is not None:
                    init = [stmt]
                self.expect(";")
        else:
            self.advance()
        cond: Expr = IntConst(1)
        if not self.at(";"):
            cond = self.condition()
        self.expect(";")
        step: list[Stmt] = []
        if not self.at(")"):
            stmt = self.simple_statement()
            if stmt is not None:
                step = [stmt]
        self.expect(")")
        body = self.block_or_stmt()
        return init + [While(cond, tuple(body) + tuple(step))]

    # -- conditions (logical connectives allowed) ----------------------------

    def condition(self) -> Expr:
        lhs = self.and_condition()
        while self.accept("||"):
            rhs = self.and_condition()
            lhs = LogicalOr(lhs, rhs)
        return lhs

    def and_condition(self) -> Expr:
        lhs = self.not_condition()
        while self.accept("&&"):
            rhs = self.not_condition()
            lhs = LogicalAnd(lhs, rhs)
        return lhs

    def not_condition(self) -> Expr:
        if self.accept("!"):
            return Not(self.not_condition())
        if self.at("("):
            # Could be a parenthesized condition or a parenthesized operand
            # of a comparison; try the former and back off on a trailing
            # comparison operator.
            save = self.pos
            self.advance()
            try:
                inner = self.condition()
                if self.at(")") and self.peek(1).kind not in ("==", "!=", "<", "<=", ">", ">="):
                    self.advance()
                    return inner
            except ParseError:
                pass
            self.pos = save
        return self.comparison()

    def comparison(self) -> Expr:
        lhs = self.expression()
        if self.peek().kind in ("==", "!=", "<", "<=", ">", ">="):
            op = self.advance().text
            rhs = self.expression()
            return Cmp(op, lhs, rhs)
        return lhs

    # -- plain expressions (no logical connectives) --------------------------

    def expression(self) -> Expr:
        if self.accept("-"):
            return Neg(self.expression())
        if self.at("int"):
            tok = self.advance()
            return IntConst(int(tok.text))
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        if self.accept("&"):
            # address-of is accepted and ignored; the operand carries meaning
            return self.expression()
        if self.at("ident"):
            name = self.advance().text
            if self.accept("("):
                args = []
                if not self.at(")"):
                    args.append(self.expression())
                    while self.accept(","):
                        args.append(self.expression())
                self.expect(")")
                return Call(name, tuple(args))
            steps = self._path_steps()
            if steps:
                return PathRead(AccessPath(name, steps))
            return Var(name)
        raise self.error(f"expected expression, found "
                         + ("end of input" if self.at("eof") else f"'{self.peek().text}'"))


def parse_program(source: str, source_name: str = "<string>") -> Program:
    """Parse C-subset source text into a Program.

    Raises ParseError with line/column on malformed input or duplicate
    procedure names.
    """
    return _Parser(_lex(source)).program(source_name)


# ---------------------------------------------------------------------------
# Pretty printer (round-trip surface)
# ---------------------------------------------------------------------------

def _print_expr(e: Expr) -> str:
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, PathRead):
        return e.path.base + e.path.render()
    if isinstance(e, Neg):
        return "-" + _print_expr(e.operand)
    if isinstance(e, Call):
        return f"{e.callee}({', '.join(_print_expr(a) for a in e.args)})"
    if isinstance(e, Cmp):
        return f"{_print_expr(e.lhs)} {e.op} {_print_expr(e.rhs)}"
    if isinstance(e, LogicalAnd):
        return f"({_print_cond(e.lhs)}) && ({_print_cond(e.rhs)})"
    if isinstance(e, LogicalOr):
        return f"({_print_cond(e.lhs)}) || ({_print_cond(e.rhs)})"
    if isinstance(e, Not):
        return f"!({_print_cond(e.operand)})"
    raise TypeError(f"unprintable expression {e!r}")


def _print_cond(e: Expr) -> str:
    return _print_expr(e)


def _print_stmt(s: Stmt, indent: int) -> list[str]:
    pad = "    " * indent
    if isinstance(s, Assign):
        if isinstance(s.target, AccessPath):
            target = s.target.base + s.target.render()
        else:
            target = s.target.name
        return [f"{pad}{target} = {_print_expr(s.rhs)};"]
    if isinstance(s, ExprStmt):
        return [f"{pad}{_print_expr(s.expr)};"]
    if isinstance(s, Return):
        if s.value is None:
            return [f"{pad}return;"]
        return [f"{pad}return {_print_expr(s.value)};"]
    if isinstance(s, If):
        lines = [f"{pad}if ({_print_cond(s.cond)}) {{"]
        for sub in s.then:
            lines.extend(_print_stmt(sub, indent + 1))
        if s.els:
            lines.append(f"{pad}}} else {{")
            for sub in s.els:
                lines.extend(_print_stmt(sub, indent + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(s, While):
        lines = [f"{pad}while ({_print_cond(s.cond)}) {{"]
        for sub in s.body:
            lines.extend(_print_stmt(sub, indent + 1))
        lines.append(f"{pad}}}")
        return lines
    raise TypeError(f"unprintable statement {s!r}")


def pretty_print(program: Program) -> str:
    """Render a Program as source text that re-parses to an identical AST."""
    lines = []
    for proc in program.procedures:
        lines.append(f"int {proc.name}({', '.join(proc.params)}) {{")
        for s in proc.body:
            lines.extend(_print_stmt(s, 1))
        lines.append("}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Control-flow graph
# ---------------------------------------------------------------------------

@dataclass
class BasicBlock:
    id: int
    stmts: list = field(default_factory=list)  # Assign | ExprStmt | Return


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    cond: Expr | None = None  # None means unconditional
    polarity: bool = True


@dataclass
class Cfg:
    blocks: list[BasicBlock]
    edges: list[Edge]
    entry: int

    def out_edges(self, block_id: int) -> list[Edge]:
        return [e for e in self.edges if e.src == block_id]


class _CfgBuilder:
    def __init__(self):
        self.blocks: list[BasicBlock] = []
        self.edges: list[Edge] = []
        self._out: dict[int, list[Edge]] = {}

    def new_block(self) -> int:
        b = BasicBlock(len(self.blocks))
        self.blocks.append(b)
        self._out[b.id] = []
        return b.id

    def add_edge(self, src, dst, cond=None, polarity=True):
        e = Edge(src, dst, cond, polarity)
        self.edges.append(e)
        self._out[src].append(e)

    def lower_branch(self, cond: Expr, src: int, t: int, f: int):
        """Short-circuit lowering of a branch condition.

        True-edges are inserted before false-edges so that path enumeration
        explores the true branch first.
        """
        if isinstance(cond, LogicalAnd):
            mid = self.new_block()
            self.lower_branch(cond.lhs, src, mid, f)
            self.lower_branch(cond.rhs, mid, t, f)
        elif isinstance(cond, LogicalOr):
            mid = self.new_block()
            self.lower_branch(cond.lhs, src, t, mid)
            self.lower_branch(cond.rhs, mid, t, f)
        elif isinstance(cond, Not):
            self.lower_branch(cond.operand, src, f, t)
        else:
            self.add_edge(src, t, cond, True)
            self.add_edge(src, f, cond, False)

    def lower_stmts(self, stmts, cur: int) -> int | None:
        """Lower a statement sequence; returns the open exit block, or None
        if every path through the sequence returned."""
        for i, s in enumerate(stmts):
            if isinstance(s, (Assign, ExprStmt)):
                self.blocks[cur].stmts.append(s)
            elif isinstance(s, Return):
                self.blocks[cur].stmts.append(s)
                return None  # later statements are unreachable
            elif isinstance(s, If):
                t_entry = self.new_block()
                f_entry = self.new_block()
                self.lower_branch(s.cond, cur, t_entry, f_entry)
                t_end = self.lower_stmts(s.then, t_entry)
                f_end = self.lower_stmts(s.els, f_entry)
                if t_end is None and f_end is None:
                    return None
                join = self.new_block()
                if t_end is not None:
                    self.add_edge(t_end, join)
                if f_end is not None:
                    self.add_edge(f_end, join)
                cur = join
            elif isinstance(s, While):
                # Unroll-and-truncate: the loop body executes zero or one
                # time; the taken branch asserts the negated condition on
                # exit.
                body_entry = self.new_block()
                after = self.new_block()
                self.lower_branch(s.cond, cur, body_entry, after)
                body_end = self.lower_stmts(s.body, body_entry)
                if body_end is not None:
                    self.add_edge(body_end, after, s.cond, False)
                cur = after
            else:
                raise TypeError(f"unloweable statement {s!r}")
        return cur


def lower_to_cfg(proc: Procedure) -> Cfg:
    """Lower a parsed procedure to an acyclic Cfg.

    Loops are unrolled so each body runs zero or one time; an implicit
    empty return is appended where a path falls off the end.
    """
    b = _CfgBuilder()
    entry = b.new_block()
    exit_block = b.lower_stmts(proc.body, entry)
    if exit_block is not None:
        b.blocks[exit_block].stmts.append(Return(None))
    # Blocks created as join points that never received a return still need
    # the implicit return to satisfy the every-path-returns invariant.
    for blk in b.blocks:
        if not b._out[blk.id] and (not blk.stmts or not isinstance(blk.stmts[-1], Return)):
            reachable = blk.id == entry or any(e.dst == blk.id for e in b.edges)
            if reachable:
                blk.stmts.append(Return(None))
    return Cfg(b.blocks, b.edges, entry)


def topo_order(cfg: Cfg) -> list[int]:
    """Topological order of cfg blocks; raises ValueError on a cycle."""
    indeg = {blk.id: 0 for blk in cfg.blocks}
    for e in cfg.edges:
        indeg[e.dst] += 1
    ready = [bid for bid, d in sorted(indeg.items()) if d == 0]
    order = []
    while ready:
        bid = ready.pop()
        order.append(bid)
        for e in cfg.out_edges(bid):
            indeg[e.dst] -= 1
            if indeg[e.dst] == 0:
                ready.append(e.dst)
    if len(order) != len(cfg.blocks):
        raise ValueError("control-flow graph contains a cycle")
    return order
