"""Pretty-printer producing canonical ``.bcn`` text."""

from __future__ import annotations

from .ast import And, Block, Cmp, Const, Copy, Expr, Literal, ModelAst, NextRef, Not, Or, Result


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Const):
        return "true" if expr.value else "false"
    if isinstance(expr, Cmp):
        lhs = f"next({expr.var})" if expr.is_next else expr.var
        return f"{lhs} {'!=' if expr.negated else '=='} {expr.value}"
    if isinstance(expr, Not):
        inner = format_expr(expr.operand)
        if isinstance(expr.operand, (Const, Not)):
            return "!" + inner
        return f"!({inner})"
    if isinstance(expr, And):
        return " && ".join(f"({format_expr(e)})" if isinstance(e, (And, Or)) else format_expr(e) for e in expr.items)
    if isinstance(expr, Or):
        return " || ".join(f"({format_expr(e)})" if isinstance(e, Or) else format_expr(e) for e in expr.items)
    raise TypeError(f"not an expression: {expr!r}")


def _result(r: Result) -> str:
    if isinstance(r, NextRef):
        return f"next({r.var})"
    if isinstance(r, Copy):
        return r.var
    if isinstance(r, Literal):
        return r.value
    raise TypeError(f"not a result: {r!r}")


def _block(b: Block) -> list[str]:
    lines = [f"  {b.kind} {b.target} {{"]
    for c in b.cases:
        lines.append(f"    case {format_expr(c.guard)} -> {_result(c.result)};")
    lines.append(f"    default -> {_result(b.default)};")
    lines.append("  }")
    return lines


def round_trip(ast: ModelAst) -> str:
    """Render ``ast`` as source text that parses back to an equal tree."""
    lines = [f"model {ast.name} {{"]
    for d in ast.decls:
        init = f" init {d.init}" if d.init is not None else ""
        lines.append(f"  {d.kind} {d.name} : {{{', '.join(d.values)}}}{init}")
    for b in ast.blocks:
        lines.append("")
        lines.extend(_block(b))
    lines.append("}")
    return "\n".join(lines) + "\n"
