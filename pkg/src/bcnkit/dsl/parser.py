"""Recursive-descent parser for ``.bcn`` model sources and set expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ast import And, Block, Case, Cmp, Const, Copy, Decl, Expr, Literal, ModelAst, NextRef, Not, Or, Result
from .errors import ParseError, SemanticError

__all__ = ["parse", "parse_expr", "KEYWORDS"]

KEYWORDS = frozenset(
    {"model", "input", "state", "output", "init", "update", "case", "default", "next", "true", "false"}
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<sym>->|==|!=|&&|\|\||[{}():,;!])
  | (?P<word>[A-Za-z0-9_]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "kw", "sym", "eof"
    text: str
    line: int
    col: int

    @property
    def pos(self):
        return (self.line, self.col)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "word":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "word", word, line, i - line_start + 1))
        elif kind == "sym":
            tokens.append(Token("sym", m.group(), line, i - line_start + 1))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, expected: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(f"expected {expected}, found {_describe(tok)}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "word":
            self.error(what)
        return self.advance()

    # model structure

    def model(self) -> ModelAst:
        self.expect("model")
        name = self.ident("model name").text
        self.expect("{")
        decls, blocks = [], []
        while not self.at("}"):
            if self.at("input") or self.at("state") or (self.at("output") and self._peek_is(":")):
                if blocks:
                    raise ParseError("declarations must precede update/output blocks", *self.tok.pos)
                decls.append(self.decl())
            elif self.at("update") or self.at("output"):
                blocks.append(self.block())
            else:
                self.error("a declaration, a block or '}'")
        end = self.expect("}")
        if self.tok.kind != "eof":
            self.error("end of input")
        return _check_model(ModelAst(name, tuple(decls), tuple(blocks)), end.pos)

    def _peek_is(self, text: str) -> bool:
        nxt = self.toks[min(self.i + 2, len(self.toks) - 1)]
        return nxt.kind == "sym" and nxt.text == text

    def decl(self) -> Decl:
        kw = self.advance()
        name = self.ident("variable name").text
        self.expect(":")
        self.expect("{")
        values = [self.ident("value label").text]
        while self.at(","):
            self.advance()
            values.append(self.ident("value label").text)
        self.expect("}")
        init = None
        if self.at("init"):
            self.advance()
            init = self.ident("initial value").text
        return Decl(kw.text, name, tuple(values), init, kw.pos)

    def block(self) -> Block:
        kw = self.advance()
        target = self.ident("variable name").text
        self.expect("{")
        cases = []
        while True:
            if self.at("case"):
                start = self.advance()
                guard = self.expr()
                self.expect("->")
                result = self.result()
                self.expect(";")
                cases.append(Case(guard, result, start.pos))
            elif self.at("default"):
                self.advance()
                self.expect("->")
                default = self.result()
                self.expect(";")
                if not self.at("}"):
                    self.error("'}' after default")
                self.advance()
                return Block(kw.text, target, tuple(cases), default, kw.pos)
            elif self.at("}"):
                raise ParseError(f"{kw.text} block for {target!r} has no default case", *self.tok.pos)
            else:
                self.error("'case' or 'default'")

    def result(self) -> Result:
        tok = self.tok
        if self.at("next"):
            self.advance()
            self.expect("(")
            var = self.ident("state variable").text
            self.expect(")")
            return NextRef(var, tok.pos)
        word = self.ident("value or variable")
        # Copy vs Literal is resolved by the semantic pass
        return Literal(word.text, word.pos)

    # expressions

    def expr(self) -> Expr:
        start = self.tok
        items = [self.and_expr()]
        while self.at("||"):
            self.advance()
            items.append(self.and_expr())
        return items[0] if len(items) == 1 else Or(tuple(items), start.pos)

    def and_expr(self) -> Expr:
        start = self.tok
        items = [self.unary()]
        while self.at("&&"):
            self.advance()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items), start.pos)

    def unary(self) -> Expr:
        tok = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.unary(), tok.pos)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if self.at("true") or self.at("false"):
            self.advance()
            return Const(tok.text == "true", tok.pos)
        is_next = False
        if self.at("next"):
            self.advance()
            self.expect("(")
            var = self.ident("state variable").text
            self.expect(")")
            is_next = True
        elif tok.kind == "word":
            var = self.advance().text
        else:
            self.error("a comparison, '!', '(' or a constant")
        if self.at("==") or self.at("!="):
            negated = self.advance().text == "!="
        else:
            self.error("'==' or '!='")
        value = self.ident("value label").text
        return Cmp(var, value, negated, is_next, tok.pos)


def parse(text: str) -> ModelAst:
    """Parse and resolve a model source.

    Raises :class:`ParseError` for malformed text and :class:`SemanticError`
    for well-formed text that names unknown variables or values, refers to
    ``next`` of a later state, or leaves a variable without its block.
    """
    return _Parser(text).model()


def parse_expr(text: str, *, allow_next: bool = False) -> Expr:
    """Parse a standalone boolean expression (a set predicate)."""
    p = _Parser(text)
    expr = p.expr()
    if p.tok.kind != "eof":
        p.error("end of expression")
    if not allow_next:
        _reject_next(expr)
    return expr


def _reject_next(expr: Expr):
    if isinstance(expr, Cmp) and expr.is_next:
        raise ParseError("next(...) is only allowed in update guards", *expr.pos)
    for child in getattr(expr, "items", ()) + ((expr.operand,) if isinstance(expr, Not) else ()):
        _reject_next(child)


# semantic resolution


def _check_model(ast: ModelAst, end_pos) -> ModelAst:
    seen: dict[str, Decl] = {}
    for d in ast.decls:
        if d.name in seen:
            raise SemanticError(f"variable {d.name!r} declared twice", *d.pos)
        if len(set(d.values)) != len(d.values):
            raise SemanticError(f"variable {d.name!r} has duplicate value labels", *d.pos)
        if d.init is not None:
            if d.kind != "state":
                raise SemanticError(f"only state variables take an init value, not {d.name!r}", *d.pos)
            if d.init not in d.values:
                raise SemanticError(f"init value {d.init!r} is not a value of {d.name!r}", *d.pos)
        seen[d.name] = d

    state_order = [d.name for d in ast.states]
    done: set[tuple[str, str]] = set()
    resolved = []
    for b in ast.blocks:
        want = "state" if b.kind == "update" else "output"
        d = seen.get(b.target)
        if d is None:
            raise SemanticError(f"{b.kind} block for undeclared variable {b.target!r}", *b.pos)
        if d.kind != want:
            raise SemanticError(f"{b.kind} block target {b.target!r} is not a {want} variable", *b.pos)
        if (b.kind, b.target) in done:
            raise SemanticError(f"second {b.kind} block for {b.target!r}", *b.pos)
        done.add((b.kind, b.target))
        earlier = set(state_order[: state_order.index(b.target)]) if b.kind == "update" else set()
        for c in b.cases:
            _check_guard(c.guard, seen, earlier, b)
        resolved.append(b)
    for d in ast.decls:
        kind = {"state": "update", "output": "output"}.get(d.kind)
        if kind and (kind, d.name) not in done:
            raise SemanticError(f"no {kind} block for {d.kind} variable {d.name!r}", *end_pos)
    return ModelAst(ast.name, ast.decls, tuple(_resolve_block(b, seen, state_order) for b in resolved))


def _check_guard(expr: Expr, seen: dict, earlier: set, block: Block) -> None:
    if isinstance(expr, Cmp):
        d = seen.get(expr.var)
        if d is None:
            raise SemanticError(f"undeclared variable {expr.var!r}", *expr.pos)
        if expr.is_next:
            if block.kind != "update":
                raise SemanticError("next(...) is only allowed in update blocks", *expr.pos)
            _check_next(expr.var, d, earlier, block, expr.pos)
        elif d.kind == "output":
            raise SemanticError(f"guards cannot read output variable {expr.var!r}", *expr.pos)
        if expr.value not in d.values:
            raise SemanticError(f"{expr.value!r} is not a value of {expr.var!r}", *expr.pos)
    elif isinstance(expr, Not):
        _check_guard(expr.operand, seen, earlier, block)
    elif isinstance(expr, (And, Or)):
        for item in expr.items:
            _check_guard(item, seen, earlier, block)


def _check_next(var: str, d: Decl, earlier: set, block: Block, pos) -> None:
    if d.kind != "state":
        raise SemanticError(f"next({var}) requires a state variable", *pos)
    if var not in earlier:
        raise SemanticError(
            f"next({var}) in the update of {block.target!r} refers to a state not declared before it", *pos
        )


def _resolve_block(b: Block, seen: dict, state_order: list) -> Block:
    target = seen[b.target]
    earlier = set(state_order[: state_order.index(b.target)]) if b.kind == "update" else set()

    def resolve(r: Result) -> Result:
        if isinstance(r, NextRef):
            d = seen.get(r.var)
            if d is None:
                raise SemanticError(f"undeclared variable {r.var!r}", *r.pos)
            if b.kind != "update":
                raise SemanticError("next(...) is only allowed in update blocks", *r.pos)
            _check_next(r.var, d, earlier, b, r.pos)
            return r
        if isinstance(r, Copy):
            return r
        name = r.value
        d = seen.get(name)
        if d is not None:
            if d.kind == "output":
                raise SemanticError(f"cannot copy output variable {name!r}", *r.pos)
            if name in target.values:
                raise SemanticError(
                    f"{name!r} is both a variable and a value of {target.name!r}; rename one", *r.pos
                )
            return Copy(name, r.pos)
        if name not in target.values:
            raise SemanticError(f"{name!r} is neither a declared variable nor a value of {target.name!r}", *r.pos)
        return r

    cases = tuple(Case(c.guard, resolve(c.result), c.pos) for c in b.cases)
    return Block(b.kind, b.target, cases, resolve(b.default), b.pos)
