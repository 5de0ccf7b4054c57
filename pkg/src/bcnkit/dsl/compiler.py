"""Compile model trees into logical matrices, plus a direct interpreter.

The compiler evaluates every rule on all ``(input, state)`` assignments at
once with numpy arrays of value positions.  The interpreter evaluates one
assignment with plain dictionaries and exists as an independent reference.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..network import Bcn, StateSpace, VariableSpec
from ..stp import LogicalMatrix
from .ast import And, Block, Cmp, Const, Copy, Decl, Expr, Literal, ModelAst, NextRef, Not, Or, Result, expr_vars
from .errors import CompileError

__all__ = ["compile_model", "spaces", "interpret", "output_reads_input"]


def spaces(ast: ModelAst) -> tuple[StateSpace, StateSpace, StateSpace]:
    def build(decls: list[Decl]) -> StateSpace:
        return StateSpace(tuple(VariableSpec(d.name, d.values) for d in decls))

    return build(ast.inputs), build(ast.states), build(ast.outputs)


def output_reads_input(ast: ModelAst) -> bool:
    inputs = {d.name for d in ast.inputs}
    for b in ast.blocks:
        if b.kind != "output":
            continue
        names = {v for c in b.cases for v, _ in expr_vars(c.guard)}
        names |= {r.var for r in [c.result for c in b.cases] + [b.default] if isinstance(r, Copy)}
        if names & inputs:
            return True
    return False


def _eval_expr(expr: Expr, env: Mapping[str, np.ndarray], nxt: Mapping[str, np.ndarray], decls, size: int):
    if isinstance(expr, Const):
        return np.full(size, expr.value, dtype=bool)
    if isinstance(expr, Cmp):
        src = nxt if expr.is_next else env
        hit = src[expr.var] == decls[expr.var].values.index(expr.value)
        return ~hit if expr.negated else hit
    if isinstance(expr, Not):
        return ~_eval_expr(expr.operand, env, nxt, decls, size)
    if isinstance(expr, And):
        out = _eval_expr(expr.items[0], env, nxt, decls, size)
        for item in expr.items[1:]:
            out = out & _eval_expr(item, env, nxt, decls, size)
        return out
    if isinstance(expr, Or):
        out = _eval_expr(expr.items[0], env, nxt, decls, size)
        for item in expr.items[1:]:
            out = out | _eval_expr(item, env, nxt, decls, size)
        return out
    raise TypeError(expr)


def _label_map(src: Decl, dst: Decl, r: Result) -> np.ndarray:
    missing = [v for v in src.values if v not in dst.values]
    if missing:
        raise CompileError(
            f"copying {src.name!r} into {dst.name!r}: values {missing} are outside the domain of {dst.name!r}",
            *r.pos,
        )
    return np.array([dst.values.index(v) for v in src.values], dtype=np.int64)


def _eval_result(r: Result, target: Decl, env, nxt, decls, size: int) -> np.ndarray:
    if isinstance(r, Literal):
        return np.full(size, target.values.index(r.value), dtype=np.int64)
    src_env = nxt if isinstance(r, NextRef) else env
    return _label_map(decls[r.var], target, r)[src_env[r.var]]


def _eval_block(b: Block, target: Decl, env, nxt, decls, size: int) -> np.ndarray:
    out = _eval_result(b.default, target, env, nxt, decls, size)
    # later cases first so that earlier matches overwrite them
    for case in reversed(b.cases):
        hit = _eval_expr(case.guard, env, nxt, decls, size)
        out = np.where(hit, _eval_result(case.result, target, env, nxt, decls, size), out)
    return out


def compile_model(ast: ModelAst) -> Bcn:
    """Build the transition and output logical matrices of a parsed model.

    Examples
    --------
    >>> from bcnkit.dsl import parse
    >>> src = '''model flip { input u : {keep, toggle} state x : {off, on}
    ...   update x { case u == toggle && x == off -> on; case u == toggle -> off; default -> x; } }'''
    >>> compile_model(parse(src)).transition.col_index.tolist()
    [1, 2, 2, 1]
    """
    in_space, st_space, out_space = spaces(ast)
    decls = {d.name: d for d in ast.decls}
    n, m = st_space.dim, in_space.dim
    size = n * m

    # column c = u * n + x (0-based), matching L ⋉ u ⋉ x
    col = np.arange(size, dtype=np.int64)
    u_pos = in_space.positions()[col // n]
    x_pos = st_space.positions()[col % n]
    env = {name: u_pos[:, k] for k, name in enumerate(in_space.names)}
    env.update({name: x_pos[:, k] for k, name in enumerate(st_space.names)})

    nxt: dict[str, np.ndarray] = {}
    for d in ast.states:
        nxt[d.name] = _eval_block(ast.block("update", d.name), d, env, nxt, decls, size)
    next_idx = st_space.encode_positions([nxt[name] for name in st_space.names]) if st_space.names else np.zeros(size, np.int64)
    transition = LogicalMatrix._from0(n, size, np.broadcast_to(next_idx, (size,)))

    by_input = output_reads_input(ast)
    if by_input:
        out_env, out_size = env, size
    else:
        out_env = {name: x_pos[:n, k] for k, name in enumerate(st_space.names)}
        out_size = n
    outs = {d.name: _eval_block(ast.block("output", d.name), d, out_env, {}, decls, out_size) for d in ast.outputs}
    if out_space.names:
        out_idx = out_space.encode_positions([outs[name] for name in out_space.names])
    else:
        out_idx = np.zeros(out_size, np.int64)
    output_map = LogicalMatrix._from0(out_space.dim, out_size, np.broadcast_to(out_idx, (out_size,)))
    return Bcn(in_space, st_space, out_space, transition, output_map, by_input, ast.name)


# reference interpreter


def _interp_expr(expr: Expr, env: Mapping[str, str], nxt: Mapping[str, str]) -> bool:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Cmp):
        value = (nxt if expr.is_next else env)[expr.var]
        return (value != expr.value) if expr.negated else (value == expr.value)
    if isinstance(expr, Not):
        return not _interp_expr(expr.operand, env, nxt)
    if isinstance(expr, And):
        return all(_interp_expr(e, env, nxt) for e in expr.items)
    if isinstance(expr, Or):
        return any(_interp_expr(e, env, nxt) for e in expr.items)
    raise TypeError(expr)


def _interp_result(r: Result, target: Decl, env, nxt) -> str:
    if isinstance(r, Literal):
        value = r.value
    elif isinstance(r, NextRef):
        value = nxt[r.var]
    else:
        value = env[r.var]
    if value not in target.values:
        raise CompileError(f"value {value!r} is outside the domain of {target.name!r}", *r.pos)
    return value


def _interp_block(b: Block, target: Decl, env, nxt) -> str:
    for case in b.cases:
        if _interp_expr(case.guard, env, nxt):
            return _interp_result(case.result, target, env, nxt)
    return _interp_result(b.default, target, env, nxt)


def interpret(ast: ModelAst, inputs: Mapping[str, str], state: Mapping[str, str]) -> tuple[dict, dict]:
    """One step of ``ast``: returns ``(next_state, output)`` as label dictionaries.

    The output is the one observed at the current time, i.e. computed from
    ``inputs`` and ``state``, not from the successor.
    """
    env = dict(inputs)
    env.update(state)
    nxt: dict[str, str] = {}
    for d in ast.states:
        nxt[d.name] = _interp_block(ast.block("update", d.name), d, env, nxt)
    out = {d.name: _interp_block(ast.block("output", d.name), d, env, {}) for d in ast.outputs}
    return nxt, out
