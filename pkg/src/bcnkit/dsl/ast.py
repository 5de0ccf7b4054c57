"""Syntax tree of ``.bcn`` models and of set expressions.

Source positions are carried for error reporting but excluded from
equality, so a re-parsed pretty-print compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

Pos = tuple[int, int]


@dataclass(frozen=True)
class Const:
    value: bool
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Cmp:
    """``var == value`` / ``var != value``; ``is_next`` marks ``next(var)``."""

    var: str
    value: str
    negated: bool = False
    is_next: bool = False
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class And:
    items: tuple["Expr", ...]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Or:
    items: tuple["Expr", ...]
    pos: Pos = field(default=(0, 0), compare=False)


Expr = Union[Const, Cmp, Not, And, Or]


@dataclass(frozen=True)
class Literal:
    value: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Copy:
    var: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class NextRef:
    var: str
    pos: Pos = field(default=(0, 0), compare=False)


Result = Union[Literal, Copy, NextRef]


@dataclass(frozen=True)
class Case:
    guard: Expr
    result: Result
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Decl:
    kind: str  # "input" | "state" | "output"
    name: str
    values: tuple[str, ...]
    init: Optional[str] = None
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Block:
    kind: str  # "update" | "output"
    target: str
    cases: tuple[Case, ...]
    default: Result
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ModelAst:
    name: str
    decls: tuple[Decl, ...]
    blocks: tuple[Block, ...]

    def declared(self, kind: str) -> list[Decl]:
        return [d for d in self.decls if d.kind == kind]

    @property
    def inputs(self) -> list[Decl]:
        return self.declared("input")

    @property
    def states(self) -> list[Decl]:
        return self.declared("state")

    @property
    def outputs(self) -> list[Decl]:
        return self.declared("output")

    def decl(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)

    def block(self, kind: str, target: str) -> Block:
        for b in self.blocks:
            if b.kind == kind and b.target == target:
                return b
        raise KeyError((kind, target))

    def initial_state(self) -> dict[str, str]:
        """Declared ``init`` values of state variables."""
        return {d.name: d.init for d in self.states if d.init is not None}


def expr_vars(expr: Expr) -> set[tuple[str, bool]]:
    """``(var, is_next)`` pairs referenced by ``expr``."""
    if isinstance(expr, Cmp):
        return {(expr.var, expr.is_next)}
    if isinstance(expr, Not):
        return expr_vars(expr.operand)
    if isinstance(expr, (And, Or)):
        out: set = set()
        for item in expr.items:
            out |= expr_vars(item)
        return out
    return set()
