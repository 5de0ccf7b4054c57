"""Canonical vectors, logical matrices and the left semi-tensor product.

A logical matrix is stored as the (1-based) row index of the single nonzero
entry of each column, so that every product below reduces to integer
arithmetic on index arrays.  Nothing in this module ever builds a dense
0/1 matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "INDEX_LIMIT",
    "DimensionOverflowError",
    "CanonicalVector",
    "LogicalMatrix",
    "delta",
    "identity",
    "stp",
    "stp_vec",
    "kron",
    "swap_matrix",
    "power_reducing_matrix",
    "columnwise_stp",
    "hstack",
]

INDEX_LIMIT = int(np.iinfo(np.int64).max)


class DimensionOverflowError(OverflowError):
    """A product of dimensions does not fit the index range."""


def checked_mul(*factors: int) -> int:
    out = 1
    for f in factors:
        out *= int(f)
        if out > INDEX_LIMIT:
            raise DimensionOverflowError(
                f"dimension product {' * '.join(str(int(x)) for x in factors)} "
                f"exceeds the index limit {INDEX_LIMIT}"
            )
    return out


@dataclass(frozen=True)
class CanonicalVector:
    """The ``index``-th column of the ``dim``-dimensional identity (1-based)."""

    dim: int
    index: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if not 1 <= self.index <= self.dim:
            raise ValueError(f"index {self.index} outside [1, {self.dim}]")

    def as_matrix(self) -> "LogicalMatrix":
        return LogicalMatrix(self.dim, 1, [self.index])

    def __repr__(self):
        return f"delta({self.index}, {self.dim})"


def delta(index: int, dim: int) -> CanonicalVector:
    """Shorthand for ``CanonicalVector(dim, index)``, argument order as in δ^index_dim."""
    return CanonicalVector(dim, index)


class LogicalMatrix:
    """A ``rows x cols`` matrix whose columns are canonical vectors.

    Parameters
    ----------
    rows, cols : int
        Shape of the matrix.
    col_index : sequence of int
        ``col_index[j]`` is the 1-based row of the nonzero entry of column
        ``j``.  Stored as an immutable ``int64`` array.
    """

    __slots__ = ("rows", "cols", "_idx")

    def __init__(self, rows: int, cols: int, col_index: Iterable[int], *, _trusted=False):
        rows, cols = int(rows), int(cols)
        if rows < 1 or cols < 1:
            raise ValueError(f"logical matrix shape must be positive, got {rows}x{cols}")
        checked_mul(rows, cols)
        idx = np.asarray(col_index, dtype=np.int64)
        if not _trusted:
            idx = np.array(idx, dtype=np.int64, copy=True).reshape(-1)
            if idx.shape[0] != cols:
                raise ValueError(f"expected {cols} column indices, got {idx.shape[0]}")
            if cols and (idx.min() < 1 or idx.max() > rows):
                raise ValueError(f"column indices must lie in [1, {rows}]")
        idx.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self._idx = idx

    @classmethod
    def _from0(cls, rows: int, cols: int, idx0: np.ndarray) -> "LogicalMatrix":
        # idx0 is 0-based and already validated by construction
        return cls(rows, cols, np.asarray(idx0, dtype=np.int64) + 1, _trusted=True)

    @property
    def col_index(self) -> np.ndarray:
        """Read-only array of 1-based row indices, one per column."""
        return self._idx

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> CanonicalVector:
        """Column ``j`` (1-based) as a canonical vector."""
        if not 1 <= j <= self.cols:
            raise IndexError(f"column {j} outside [1, {self.cols}]")
        return CanonicalVector(self.rows, int(self._idx[j - 1]))

    def columns(self, start: int, stop: int) -> "LogicalMatrix":
        """Columns ``start..stop`` inclusive, 1-based."""
        if not 1 <= start <= stop <= self.cols:
            raise IndexError(f"column range [{start}, {stop}] outside [1, {self.cols}]")
        return LogicalMatrix(self.rows, stop - start + 1, self._idx[start - 1 : stop], _trusted=True)

    def blocks(self, size: int) -> list["LogicalMatrix"]:
        """Split into consecutive ``rows x size`` blocks."""
        if size < 1 or self.cols % size:
            raise ValueError(f"{self.cols} columns do not split into blocks of {size}")
        return [self.columns(k * size + 1, (k + 1) * size) for k in range(self.cols // size)]

    def apply(self, v: CanonicalVector) -> CanonicalVector:
        """Ordinary product with a conformable canonical vector."""
        if v.dim != self.cols:
            raise ValueError(f"vector of dim {v.dim} does not conform to {self.rows}x{self.cols}")
        return CanonicalVector(self.rows, int(self._idx[v.index - 1]))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "col_index": self._idx.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "LogicalMatrix":
        try:
            return cls(doc["rows"], doc["cols"], doc["col_index"])
        except KeyError as exc:
            raise ValueError(f"logical matrix document lacks field {exc}") from None

    def __eq__(self, other):
        if not isinstance(other, LogicalMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._idx, other._idx)

    def __hash__(self):
        return hash((self.rows, self.cols, self._idx.tobytes()))

    def __repr__(self):
        if self.cols <= 12:
            body = self._idx.tolist()
        else:
            body = f"[{', '.join(map(str, self._idx[:6].tolist()))}, ...]"
        return f"LogicalMatrix({self.rows}x{self.cols}, {body})"


def identity(k: int) -> LogicalMatrix:
    return LogicalMatrix(k, k, np.arange(1, k + 1), _trusted=True)


def stp(lhs: LogicalMatrix, rhs: LogicalMatrix) -> LogicalMatrix:
    """Left semi-tensor product ``lhs ⋉ rhs``.

    With ``t = lcm(lhs.cols, rhs.rows)`` the product equals
    ``(lhs ⊗ I_{t/lhs.cols}) (rhs ⊗ I_{t/rhs.rows})``.  Column ``m`` of
    ``rhs ⊗ I_q`` points at row ``b[m // q] * q + m % q`` and that row is a
    column of ``lhs ⊗ I_p``, which in turn points at
    ``a[j // p] * p + j % p`` (all 0-based).
    """
    t = math.lcm(lhs.cols, rhs.rows)
    p, q = t // lhs.cols, t // rhs.rows
    rows = checked_mul(lhs.rows, p)
    cols = checked_mul(rhs.cols, q)
    a0 = lhs.col_index - 1
    b0 = rhs.col_index - 1
    if p == 1 and q == 1:
        return LogicalMatrix._from0(rows, cols, a0[b0])
    m = np.arange(cols, dtype=np.int64)
    j = b0[m // q] * q + m % q
    return LogicalMatrix._from0(rows, cols, a0[j // p] * p + j % p)


def stp_vec(x: CanonicalVector, y: CanonicalVector) -> CanonicalVector:
    """``x ⋉ y`` for canonical vectors: index ``(i - 1) * dim(y) + j``."""
    dim = checked_mul(x.dim, y.dim)
    return CanonicalVector(dim, (x.index - 1) * y.dim + y.index)


def kron(lhs: LogicalMatrix, rhs: LogicalMatrix) -> LogicalMatrix:
    rows = checked_mul(lhs.rows, rhs.rows)
    cols = checked_mul(lhs.cols, rhs.cols)
    a0 = lhs.col_index - 1
    b0 = rhs.col_index - 1
    out = (a0[:, None] * rhs.rows + b0[None, :]).reshape(-1)
    return LogicalMatrix._from0(rows, cols, out)


def swap_matrix(m: int, n: int) -> LogicalMatrix:
    """The ``mn x mn`` swap matrix: ``W ⋉ x ⋉ y = y ⋉ x`` for ``x ∈ L_m``, ``y ∈ L_n``."""
    size = checked_mul(m, n)
    c = np.arange(size, dtype=np.int64)
    return LogicalMatrix._from0(size, size, (c % n) * m + c // n)


def power_reducing_matrix(n: int) -> LogicalMatrix:
    """The ``n² x n`` matrix with ``Φ x = x ⋉ x`` for every ``x ∈ L_n``."""
    rows = checked_mul(n, n)
    i = np.arange(n, dtype=np.int64)
    return LogicalMatrix._from0(rows, n, i * n + i)


def columnwise_stp(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    """Matrix whose column ``j`` is ``a_j ⋉ b_j``."""
    if a.cols != b.cols:
        raise ValueError(f"column counts differ: {a.cols} vs {b.cols}")
    rows = checked_mul(a.rows, b.rows)
    return LogicalMatrix._from0(rows, a.cols, (a.col_index - 1) * b.rows + (b.col_index - 1))


def hstack(matrices: Sequence[LogicalMatrix]) -> LogicalMatrix:
    """Concatenate logical matrices with equal row counts side by side."""
    if not matrices:
        raise ValueError("nothing to stack")
    rows = matrices[0].rows
    if any(mat.rows != rows for mat in matrices):
        raise ValueError("row counts differ")
    idx = np.concatenate([mat.col_index for mat in matrices])
    return LogicalMatrix(rows, idx.shape[0], idx, _trusted=True)
