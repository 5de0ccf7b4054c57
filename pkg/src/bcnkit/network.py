"""State spaces, control networks and simulation.

Transition matrices of control networks are ordered input-major and
state-minor, i.e. column ``(i - 1) * N + j`` holds the successor of state
``j`` under input ``i``, which is what ``L ⋉ u ⋉ x`` produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .stp import CanonicalVector, LogicalMatrix, checked_mul, stp_vec

__all__ = [
    "MAX_SPACE_DIM",
    "SpaceTooLargeError",
    "VariableSpec",
    "StateSpace",
    "Bcn",
    "Bn",
    "Trajectory",
    "encode",
    "decode",
    "input_block",
    "step",
    "simulate",
]

MAX_SPACE_DIM = 2**24


class SpaceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class VariableSpec:
    """A named variable over an ordered, finite set of value labels."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(str(v) for v in self.values))
        if not self.values:
            raise ValueError(f"variable {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"variable {self.name!r} has duplicate value labels")

    @property
    def card(self) -> int:
        return len(self.values)

    def position(self, label: str) -> int:
        """1-based position of ``label``."""
        try:
            return self.values.index(label) + 1
        except ValueError:
            raise KeyError(f"{label!r} is not a value of {self.name!r} {list(self.values)}") from None


Assignment = Union[Sequence[str], Mapping[str, str]]


@dataclass(frozen=True)
class StateSpace:
    """Ordered product of variables, encoded mixed-radix with the first variable most significant."""

    variables: tuple[VariableSpec, ...] = ()
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        dim = checked_mul(*(v.card for v in self.variables))
        if dim > MAX_SPACE_DIM:
            raise SpaceTooLargeError(f"space dimension {dim} exceeds the supported {MAX_SPACE_DIM}")
        object.__setattr__(self, "dim", dim)

    @classmethod
    def of(cls, **variables: Sequence[str]) -> "StateSpace":
        return cls(tuple(VariableSpec(k, tuple(v)) for k, v in variables.items()))

    @classmethod
    def flat(cls, name: str, dim: int) -> "StateSpace":
        """A single variable named ``name`` with labels ``"1"..str(dim)``."""
        return cls((VariableSpec(name, tuple(str(i) for i in range(1, dim + 1))),))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def radices(self) -> tuple[int, ...]:
        return tuple(v.card for v in self.variables)

    def variable(self, name: str) -> VariableSpec:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(f"unknown variable {name!r}; space has {list(self.names)}")

    def index_of(self, name: str) -> int:
        """0-based position of the named variable in the ordering."""
        self.variable(name)
        return self.names.index(name)

    def _strides(self) -> list[int]:
        strides, acc = [], 1
        for card in reversed(self.radices):
            strides.append(acc)
            acc *= card
        return strides[::-1]

    def encode(self, assignment: Assignment) -> CanonicalVector:
        if isinstance(assignment, Mapping):
            extra = set(assignment) - set(self.names)
            if extra:
                raise KeyError(f"unknown variables {sorted(extra)}")
            missing = [n for n in self.names if n not in assignment]
            if missing:
                raise ValueError(f"no value given for {missing}")
            labels = [assignment[n] for n in self.names]
        else:
            labels = list(assignment)
            if len(labels) != len(self.variables):
                raise ValueError(f"expected {len(self.variables)} labels, got {len(labels)}")
        index = 1
        for var, stride, label in zip(self.variables, self._strides(), labels):
            index += (var.position(label) - 1) * stride
        return CanonicalVector(self.dim, index)

    def decode(self, v: Union[CanonicalVector, int]) -> list[str]:
        index = self._check(v)
        rest = index - 1
        out = []
        for var, stride in zip(self.variables, self._strides()):
            pos, rest = divmod(rest, stride)
            out.append(var.values[pos])
        return out

    def decode_dict(self, v: Union[CanonicalVector, int]) -> dict[str, str]:
        return dict(zip(self.names, self.decode(v)))

    def positions(self) -> np.ndarray:
        """``(dim, n_vars)`` array of 0-based value positions for every index, in index order."""
        idx = np.arange(self.dim, dtype=np.int64)
        out = np.empty((self.dim, len(self.variables)), dtype=np.int64)
        for k, (card, stride) in enumerate(zip(self.radices, self._strides())):
            out[:, k] = (idx // stride) % card
        return out

    def encode_positions(self, positions: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized inverse of :meth:`positions`; returns 0-based indices."""
        if len(positions) != len(self.variables):
            raise ValueError("one position array per variable required")
        out = np.zeros(np.shape(positions[0]) if positions else (), dtype=np.int64)
        for pos, stride in zip(positions, self._strides()):
            out = out + np.asarray(pos, dtype=np.int64) * stride
        return out

    def concat(self, other: "StateSpace") -> "StateSpace":
        """The space of ``self ⋉ other`` (``self`` is the high-order factor)."""
        return StateSpace(self.variables + other.variables)

    def vector(self, v: Union[CanonicalVector, int]) -> CanonicalVector:
        return CanonicalVector(self.dim, self._check(v))

    def _check(self, v) -> int:
        if isinstance(v, CanonicalVector):
            if v.dim != self.dim:
                raise ValueError(f"vector of dim {v.dim} does not belong to a space of dim {self.dim}")
            return v.index
        index = int(v)
        if not 1 <= index <= self.dim:
            raise ValueError(f"index {index} outside [1, {self.dim}]")
        return index

    def to_dict(self) -> dict:
        return {"variables": [{"name": v.name, "values": list(v.values)} for v in self.variables]}

    @classmethod
    def from_dict(cls, doc: dict) -> "StateSpace":
        return cls(tuple(VariableSpec(v["name"], tuple(v["values"])) for v in doc["variables"]))


def encode(space: StateSpace, assignment: Assignment) -> CanonicalVector:
    return space.encode(assignment)


def decode(space: StateSpace, v: Union[CanonicalVector, int]) -> list[str]:
    return space.decode(v)


@dataclass(frozen=True, eq=False)
class Bcn:
    """Control network ``x⁺ = L ⋉ u ⋉ x`` with output ``y = H x`` or ``y = H ⋉ u ⋉ x``."""

    input_space: StateSpace
    state_space: StateSpace
    output_space: StateSpace
    transition: LogicalMatrix
    output_map: LogicalMatrix
    output_depends_on_input: bool = False
    name: Optional[str] = None

    def __post_init__(self):
        n, m, p = self.state_space.dim, self.input_space.dim, self.output_space.dim
        if self.transition.shape != (n, n * m):
            raise ValueError(f"transition must be {n}x{n * m}, got {self.transition.rows}x{self.transition.cols}")
        expected = (p, n * m) if self.output_depends_on_input else (p, n)
        if self.output_map.shape != expected:
            raise ValueError(
                f"output map must be {expected[0]}x{expected[1]}, got {self.output_map.rows}x{self.output_map.cols}"
            )

    @property
    def n_states(self) -> int:
        return self.state_space.dim

    @property
    def n_inputs(self) -> int:
        return self.input_space.dim

    @property
    def n_outputs(self) -> int:
        return self.output_space.dim

    def input_block(self, i: int) -> LogicalMatrix:
        if not 1 <= i <= self.n_inputs:
            raise IndexError(f"input index {i} outside [1, {self.n_inputs}]")
        n = self.n_states
        return self.transition.columns((i - 1) * n + 1, i * n)

    def output(self, x: CanonicalVector, u: Optional[CanonicalVector] = None) -> CanonicalVector:
        x = self.state_space.vector(x)
        if self.output_depends_on_input:
            if u is None:
                raise ValueError("this output map depends on the input")
            return self.output_map.column(stp_vec(self.input_space.vector(u), x).index)
        return self.output_map.column(x.index)

    def step(self, x: CanonicalVector, u: CanonicalVector) -> tuple[CanonicalVector, CanonicalVector]:
        x = self.state_space.vector(x)
        u = self.input_space.vector(u)
        x_next = self.transition.column(stp_vec(u, x).index)
        return x_next, self.output(x, u)

    def as_bn(self, u: Union[CanonicalVector, int] = 1) -> "Bn":
        """The autonomous network obtained by holding the input constant."""
        u = self.input_space.vector(u)
        out = None
        if not self.output_depends_on_input:
            out = self.output_map
        else:
            n = self.n_states
            out = self.output_map.columns((u.index - 1) * n + 1, u.index * n)
        return Bn(self.state_space, self.input_block(u.index), out, self.output_space, self.name)


@dataclass(frozen=True, eq=False)
class Bn:
    """Autonomous network ``x⁺ = L x``, optionally with ``y = H x``."""

    state_space: StateSpace
    transition: LogicalMatrix
    output_map: Optional[LogicalMatrix] = None
    output_space: Optional[StateSpace] = None
    name: Optional[str] = None

    def __post_init__(self):
        n = self.state_space.dim
        if self.transition.shape != (n, n):
            raise ValueError(f"transition must be {n}x{n}, got {self.transition.rows}x{self.transition.cols}")
        if self.output_map is not None:
            if self.output_map.cols != n:
                raise ValueError("output map must have one column per state")
            if self.output_space is None:
                object.__setattr__(self, "output_space", StateSpace.flat("y", self.output_map.rows))
            elif self.output_space.dim != self.output_map.rows:
                raise ValueError("output map rows do not match the output space")

    @property
    def n_states(self) -> int:
        return self.state_space.dim

    @property
    def successors(self) -> np.ndarray:
        """1-based successor of every state."""
        return self.transition.col_index

    def step(self, x: CanonicalVector) -> tuple[CanonicalVector, Optional[CanonicalVector]]:
        x = self.state_space.vector(x)
        y = self.output_map.column(x.index) if self.output_map is not None else None
        return self.transition.column(x.index), y


@dataclass(frozen=True)
class Trajectory:
    states: tuple[CanonicalVector, ...]
    inputs: tuple[CanonicalVector, ...] = ()
    outputs: tuple[CanonicalVector, ...] = ()

    def __len__(self):
        return len(self.states)

    def state_indices(self) -> list[int]:
        return [x.index for x in self.states]


def input_block(net: Bcn, i: int) -> LogicalMatrix:
    return net.input_block(i)


def step(net: Bcn, x: CanonicalVector, u: CanonicalVector):
    return net.step(x, u)


def simulate(net: Union[Bcn, Bn], x0, inputs: Sequence = (), horizon: int = 0) -> Trajectory:
    """Run ``horizon`` steps from ``x0``.

    ``outputs[t]`` is the output at time ``t``; for state-only outputs the
    output at the final time is included as well.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    x = net.state_space.vector(x0)
    states, outputs = [x], []
    if isinstance(net, Bn):
        for _ in range(horizon):
            x, y = net.step(x)
            states.append(x)
            if y is not None:
                outputs.append(y)
        if net.output_map is not None:
            outputs.append(net.output_map.column(x.index))
        return Trajectory(tuple(states), (), tuple(outputs))

    if len(inputs) < horizon:
        raise ValueError(f"need {horizon} inputs, got {len(inputs)}")
    used = tuple(net.input_space.vector(u) for u in inputs[:horizon])
    for u in used:
        x, y = net.step(x, u)
        states.append(x)
        outputs.append(y)
    if not net.output_depends_on_input:
        outputs.append(net.output(x))
    return Trajectory(tuple(states), used, tuple(outputs))
