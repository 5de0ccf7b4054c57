"""The ``.bcn`` modeling language: parser, pretty-printer, compiler and interpreter."""

from .ast import And, Block, Case, Cmp, Const, Copy, Decl, Literal, ModelAst, NextRef, Not, Or
from .compiler import compile_model, interpret, spaces
from .errors import CompileError, ModelError, ParseError, SemanticError
from .parser import parse, parse_expr
from .printer import format_expr, round_trip


def compile_source(text: str):
    """Parse and compile model source text into a :class:`~bcnkit.network.Bcn`."""
    return compile_model(parse(text))


__all__ = [
    "And", "Block", "Case", "Cmp", "Const", "Copy", "Decl", "Literal", "ModelAst", "NextRef", "Not", "Or",
    "CompileError", "ModelError", "ParseError", "SemanticError",
    "compile_model", "compile_source", "format_expr", "interpret", "parse", "parse_expr", "round_trip", "spaces",
]
