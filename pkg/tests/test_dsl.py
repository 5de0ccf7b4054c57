import itertools
import random
from pathlib import Path

import numpy as np
import pytest

from bcnkit.casestudy import model_source
from bcnkit.dsl import (
    CompileError,
    Copy,
    Literal,
    ModelError,
    ParseError,
    SemanticError,
    compile_model,
    compile_source,
    interpret,
    parse,
    parse_expr,
    round_trip,
    spaces,
)
from bcnkit.stp import LogicalMatrix, identity

from oracles import all_assignments, random_model

BAD = Path(__file__).parent / "fixtures" / "bad"

BAD_POSITIONS = {
    "ambiguous_name": (SemanticError, 4, 16),
    "bad_character": (ParseError, 4, 19),
    "bad_init": (SemanticError, 2, 3),
    "duplicate_variable": (SemanticError, 3, 3),
    "forward_next": (SemanticError, 5, 10),
    "malformed_guard": (ParseError, 5, 15),
    "missing_arrow": (ParseError, 4, 17),
    "missing_block": (SemanticError, 7, 1),
    "missing_default": (ParseError, 5, 3),
    "next_in_output": (SemanticError, 8, 10),
    "self_next": (SemanticError, 4, 10),
    "unclosed_paren": (ParseError, 4, 18),
    "undeclared_value": (SemanticError, 4, 10),
    "undeclared_variable": (SemanticError, 4, 10),
    "unknown_result": (SemanticError, 4, 16),
    "unterminated": (ParseError, 6, 1),
}

MINIMAL = """
model Minimal {
  input u : {off, on}
  state x : {off, on}
  update x { default -> x; }
}
"""

TRUTH_TABLE = """
// x' = x xor u over {F, T}; values listed F first
model Xor {
  input u : {F, T}
  state x : {F, T}
  output y : {F, T}
  update x {
    case u == T && x == F -> T;
    case u == T && x == T -> F;
    default -> x;
  }
  output y { default -> x; }
}
"""


def test_minimal_model():
    ast = parse(MINIMAL)
    assert [d.name for d in ast.inputs] == ["u"] and [d.name for d in ast.states] == ["x"]
    assert len(ast.blocks) == 1 and ast.blocks[0].cases == ()
    assert ast.blocks[0].default == Copy("x")
    net = compile_model(ast)
    for i in (1, 2):
        assert net.input_block(i) == identity(2)


def test_truth_table_by_hand():
    # columns (u, x): (F,F) (F,T) (T,F) (T,T) -> x' = F T T F
    net = compile_source(TRUTH_TABLE)
    assert net.transition == LogicalMatrix(2, 4, [1, 2, 2, 1])
    assert net.output_map == identity(2)


def test_case_order_matters():
    first = """
    model Order {
      input u : {a, b}
      state x : {a, b}
      update x {
        case u == a -> a;
        case x == a -> b;
        default -> x;
      }
    }
    """
    swapped = first.replace("case u == a -> a;\n        case x == a -> b;", "case x == a -> b;\n        case u == a -> a;")
    assert swapped != first
    m1, m2 = compile_source(first), compile_source(swapped)
    # (u=a, x=a): first-match picks a in one order and b in the other
    assert m1.transition.col_index.tolist() == [1, 1, 2, 2]
    assert m2.transition.col_index.tolist() == [2, 1, 2, 2]


def test_staged_next():
    src = """
    model Staged {
      input u : {a, b}
      state x : {a, b}
      state c : {n, y}
      update x { default -> u; }
      update c {
        case next(x) == a && x == b -> y;
        case next(x) != a && x != b -> y;
        default -> n;
      }
    }
    """
    ast = parse(src)
    for inputs, state in itertools.product(all_assignments(spaces(ast)[0]), all_assignments(spaces(ast)[1])):
        nxt, _ = interpret(ast, inputs, state)
        assert nxt["x"] == inputs["u"]
        assert nxt["c"] == ("y" if inputs["u"] != state["x"] else "n")


def test_copy_and_literal_resolution():
    src = """
    model R {
      input u : {a, b}
      state x : {a, b, c}
      update x {
        case u == a -> c;
        default -> u;
      }
    }
    """
    b = parse(src).block("update", "x")
    assert b.cases[0].result == Literal("c") and b.default == Copy("u")


def test_copy_domain_mismatch_is_compile_error():
    src = """
    model Bad {
      input u : {a, b, z}
      state x : {a, b}
      update x { default -> u; }
    }
    """
    ast = parse(src)
    with pytest.raises(CompileError) as info:
        compile_model(ast)
    assert info.value.line == 5
    env = {"u": "z", "x": "a"}
    with pytest.raises(CompileError):
        interpret(ast, {"u": "z"}, {"x": "a"})
    assert interpret(ast, {"u": "b"}, {"x": env["x"]})[0] == {"x": "b"}


def test_patient_context_inventory():
    ast = parse(model_source("patient_context"))
    assert (len(ast.inputs), len(ast.states), len(ast.outputs)) == (3, 4, 2)
    net = compile_model(ast)
    assert net.transition.shape == (270, 7290)
    assert net.output_map.shape == (18, 270)


@pytest.mark.parametrize("name", sorted(BAD_POSITIONS))
def test_negative_fixture_positions(name):
    kind, line, col = BAD_POSITIONS[name]
    with pytest.raises(ModelError) as info:
        parse((BAD / f"{name}.bcn").read_text())
    assert isinstance(info.value, kind)
    assert (info.value.line, info.value.column) == (line, col)
    assert str(info.value).startswith(f"line {line}, column {col}:")


def test_every_fixture_is_listed():
    assert {p.stem for p in BAD.glob("*.bcn")} == set(BAD_POSITIONS)


def test_expression_precedence():
    e = parse_expr("a == x || b == y && !c == z")
    assert type(e).__name__ == "Or"
    assert type(e.items[1]).__name__ == "And"
    with pytest.raises(ParseError):
        parse_expr("next(a) == x")
    assert parse_expr("next(a) == x", allow_next=True).is_next


def _equivalent(ast):
    net = compile_model(ast)
    in_space, st_space, out_space = spaces(ast)
    trans, outm = net.transition.col_index, net.output_map.col_index
    for ui, inputs in enumerate(all_assignments(in_space)):
        for xi, state in enumerate(all_assignments(st_space)):
            nxt, out = interpret(ast, inputs, state)
            col = ui * st_space.dim + xi
            assert trans[col] == st_space.encode(nxt).index
            o = outm[col] if net.output_depends_on_input else outm[xi]
            assert o == out_space.encode(out).index


def test_interpreter_compiler_equivalence_generated():
    rng = random.Random(2024)
    for _ in range(150):
        _equivalent(random_model(rng))


def test_round_trip_generated():
    rng = random.Random(99)
    for _ in range(200):
        ast = random_model(rng)
        text = round_trip(ast)
        again = parse(text)
        assert again == ast
        assert round_trip(again) == text


@pytest.mark.parametrize("name", ["patient_context", "patient_model", "patient_model_mutant"])
def test_round_trip_shipped(name):
    ast = parse(model_source(name))
    assert parse(round_trip(ast)) == ast


def test_compiler_is_deterministic():
    ast = parse(model_source("patient_context"))
    a, b = compile_model(ast), compile_model(ast)
    assert a.transition == b.transition and np.array_equal(a.output_map.col_index, b.output_map.col_index)


def test_error_is_positioned_on_compile_of_text():
    with pytest.raises(ModelError):
        compile_source("model X { state x : {a} update x { } }")
