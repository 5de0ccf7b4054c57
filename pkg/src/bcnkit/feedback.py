"""Feedback interconnection of a context network and a plant network.

The context evolves as ``x⁺ = L ⋉ u ⋉ x`` with output ``y = M x``; the plant
as ``s⁺ = F ⋉ y ⋉ u ⋉ s`` with output ``u = H s``.  Closing the loop gives an
autonomous network on ``v = s ⋉ x`` (plant factor high-order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .dsl.ast import And, Cmp, Const, Expr, Not
from .dsl.errors import ModelError
from .dsl.parser import parse_expr
from .network import Bcn, Bn, StateSpace
from .stp import LogicalMatrix, checked_mul, columnwise_stp, hstack

__all__ = [
    "ClosedLoop",
    "StateSet",
    "compose",
    "reduce_plant",
    "plant_input_split",
    "comparison_output",
    "state_set",
    "predicate_mask",
]


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    plant: Bcn
    context: Bcn
    a_matrix: LogicalMatrix
    b_matrix: LogicalMatrix
    transition: LogicalMatrix
    psi: LogicalMatrix
    combined_space: StateSpace

    @property
    def bn(self) -> Bn:
        return Bn(self.combined_space, self.transition, self.psi, self.context.output_space,
                  name=f"{self.plant.name or 'plant'}*{self.context.name or 'context'}")

    @property
    def n_states(self) -> int:
        return self.combined_space.dim


def plant_input_split(plant: Bcn) -> tuple[StateSpace, int]:
    """Split the plant input space into its ``y`` part and the fed-back ``u`` part.

    The fed-back factor is the trailing group of input variables whose
    cardinalities match the plant's output variables.  Returns the ``y``
    space and the number of ``u`` values.
    """
    ins = plant.input_space.variables
    outs = plant.output_space.variables
    k = len(outs)
    if k == 0 or len(ins) < k or [v.card for v in ins[len(ins) - k :]] != [v.card for v in outs]:
        raise ValueError(
            "plant input space must end with variables matching its output space "
            f"(input {list(plant.input_space.names)}, output {list(plant.output_space.names)})"
        )
    return StateSpace(ins[: len(ins) - k]), plant.output_space.dim


def compose(context: Bcn, plant: Bcn) -> ClosedLoop:
    """Close the loop between ``context`` and ``plant``.

    The plant input space is either the context output space alone, or
    the context output space followed by the context input space (the
    plant then also reads its own output ``u``).  ``A`` and ``B`` are
    filled column by column from the update equations rather than through
    the literal product chain; the results are identical.
    """
    n_u, n_x, n_y = context.n_inputs, context.n_states, context.n_outputs
    n_s = plant.n_states
    if context.output_depends_on_input:
        raise ValueError("context output must depend on its state only (y = M x)")
    if plant.output_depends_on_input:
        raise ValueError("plant output must depend on its state only (u = H s)")
    if plant.n_outputs != n_u:
        raise ValueError(f"plant output dim {plant.n_outputs} differs from context input dim {n_u}")
    if plant.n_inputs == n_y * n_u:
        reads_u = True
    elif plant.n_inputs == n_y:
        reads_u = False
    else:
        raise ValueError(
            f"plant input dim {plant.n_inputs} is neither {n_y} (y) nor {n_y * n_u} (y ⋉ u)"
        )
    size = checked_mul(n_s, n_x)
    combined = plant.state_space.concat(context.state_space)

    v = np.arange(size, dtype=np.int64)
    s, x = v // n_x, v % n_x
    u = plant.output_map.col_index[s] - 1
    y = context.output_map.col_index[x] - 1
    plant_col = (y * n_u + u) * n_s + s if reads_u else y * n_s + s
    s_next = plant.transition.col_index[plant_col]
    x_next = context.transition.col_index[u * n_x + x]

    a_matrix = LogicalMatrix(n_s, size, s_next, _trusted=True)
    b_matrix = LogicalMatrix(n_x, size, x_next, _trusted=True)
    transition = columnwise_stp(a_matrix, b_matrix)
    psi = hstack([context.output_map] * n_s)
    return ClosedLoop(plant, context, a_matrix, b_matrix, transition, psi, combined)


def reduce_plant(plant: Bcn) -> Bcn:
    """Substitute ``u = H s`` into the plant, giving ``s⁺ = 𝔽 ⋉ y ⋉ s``."""
    y_space, n_u = plant_input_split(plant)
    n_s, n_y = plant.n_states, y_space.dim
    col = np.arange(n_y * n_s, dtype=np.int64)
    y, s = col // n_s, col % n_s
    u = plant.output_map.col_index[s] - 1
    reduced = plant.transition.col_index[(y * n_u + u) * n_s + s]
    transition = LogicalMatrix(n_s, n_y * n_s, reduced, _trusted=True)
    name = f"{plant.name}_reduced" if plant.name else None
    return Bcn(y_space, plant.state_space, plant.output_space, transition, plant.output_map, False, name)


def comparison_output(
    plant_space: StateSpace,
    context_space: StateSpace,
    plant_var: str,
    context_var: str,
    correspondence: Optional[Mapping[str, str]] = None,
) -> LogicalMatrix:
    """The ``2 x N_s N_x`` matrix that outputs δ¹₂ where the two variables agree.

    ``correspondence`` maps plant values to the context values they match;
    by default every plant value matches the context value with the same
    label.  Unmapped values never match.
    """
    pv = plant_space.variable(plant_var)
    cv = context_space.variable(context_var)
    if correspondence is None:
        correspondence = {label: label for label in pv.values if label in cv.values}
    targets = list(correspondence.values())
    if len(set(targets)) != len(targets):
        raise ValueError("correspondence is not injective")
    table = np.zeros((pv.card, cv.card), dtype=bool)
    for p_label, c_label in correspondence.items():
        table[pv.position(p_label) - 1, cv.position(c_label) - 1] = True

    n_x = context_space.dim
    size = checked_mul(plant_space.dim, n_x)
    v = np.arange(size, dtype=np.int64)
    p_pos = plant_space.positions()[:, plant_space.index_of(plant_var)][v // n_x]
    c_pos = context_space.positions()[:, context_space.index_of(context_var)][v % n_x]
    return LogicalMatrix(2, size, np.where(table[p_pos, c_pos], 1, 2), _trusted=True)


class StateSet:
    """A subset of a state space, held as a sorted array of 1-based indices."""

    def __init__(self, space: StateSpace, indices: Iterable[int], expr: Optional[str] = None):
        idx = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64))
        if idx.size and (idx[0] < 1 or idx[-1] > space.dim):
            raise ValueError(f"state indices must lie in [1, {space.dim}]")
        idx.flags.writeable = False
        self.space = space
        self.indices = idx
        self.expr = expr

    @classmethod
    def from_mask(cls, space: StateSpace, mask: np.ndarray, expr: Optional[str] = None) -> "StateSet":
        return cls(space, np.flatnonzero(mask) + 1, expr)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.space.dim, dtype=bool)
        out[self.indices - 1] = True
        return out

    def issubset(self, other: "StateSet") -> bool:
        return bool(np.isin(self.indices, other.indices).all())

    def __len__(self):
        return int(self.indices.size)

    def __contains__(self, index) -> bool:
        i = getattr(index, "index", index)
        pos = np.searchsorted(self.indices, i)
        return bool(pos < self.indices.size and self.indices[pos] == i)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __eq__(self, other):
        if not isinstance(other, StateSet):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.indices, other.indices)

    def __repr__(self):
        label = f" {self.expr!r}" if self.expr else ""
        return f"StateSet({len(self)} of {self.space.dim}{label})"


def predicate_mask(space: StateSpace, predicate: Union[str, Expr]) -> np.ndarray:
    """Boolean mask over the space's indices (in order) of states satisfying ``predicate``."""
    expr = parse_expr(predicate) if isinstance(predicate, str) else predicate
    pos = space.positions()

    def ev(e: Expr) -> np.ndarray:
        if isinstance(e, Const):
            return np.full(space.dim, e.value, dtype=bool)
        if isinstance(e, Cmp):
            try:
                var = space.variable(e.var)
                target = var.position(e.value) - 1
            except KeyError as exc:
                raise ModelError(exc.args[0], *e.pos) from None
            hit = pos[:, space.index_of(e.var)] == target
            return ~hit if e.negated else hit
        if isinstance(e, Not):
            return ~ev(e.operand)
        parts = [ev(item) for item in e.items]
        return np.logical_and.reduce(parts) if isinstance(e, And) else np.logical_or.reduce(parts)

    return ev(expr)


def state_set(space: StateSpace, predicate: Union[str, Expr]) -> StateSet:
    """States of ``space`` satisfying a set expression such as ``"S1 == H && X1 == H"``."""
    text = predicate if isinstance(predicate, str) else None
    return StateSet.from_mask(space, predicate_mask(space, predicate), text)
