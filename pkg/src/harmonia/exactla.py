"""Exact rational linear algebra.

Matrices are immutable and stored column-sparse. Elimination is delegated to an
:class:`~harmonia.backends.EliminationBackend`; every backend produces the unique
reduced row echelon form, so kernels, solutions and ranks do not depend on the choice.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from typing_extensions import Self

from .backends import EliminationBackend, IntegerRowReducer, get_backend

Scalar = Fraction
Vector = dict[int, Fraction]
Labels = tuple[object, ...]


def as_scalar(value: Fraction | int | str) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _clean(entries: Mapping[int, Fraction | int | str]) -> tuple[tuple[int, Fraction], ...]:
    items = ((row, as_scalar(value)) for row, value in entries.items())
    return tuple(sorted((row, value) for row, value in items if value))


@dataclass(frozen=True)
class ExactMatrix:
    """A ``rows`` x ``cols`` rational matrix with optional simplex labels."""

    rows: int
    cols: int
    columns: tuple[tuple[tuple[int, Fraction], ...], ...]
    row_labels: Labels | None = None
    col_labels: Labels | None = None

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.columns) != self.cols:
            raise ValueError(f"expected {self.cols} columns, got {len(self.columns)}")
        for column in self.columns:
            for row, _value in column:
                if not 0 <= row < self.rows:
                    raise IndexError(f"row index {row} outside 0..{self.rows - 1}")
        if self.row_labels is not None and len(self.row_labels) != self.rows:
            raise ValueError("row label count differs from row count")
        if self.col_labels is not None and len(self.col_labels) != self.cols:
            raise ValueError("column label count differs from column count")

    @classmethod
    def from_columns(
        cls,
        columns: Iterable[Mapping[int, Fraction | int | str]],
        rows: int,
        *,
        row_labels: Sequence[object] | None = None,
        col_labels: Sequence[object] | None = None,
    ) -> Self:
        cleaned = tuple(_clean(column) for column in columns)
        return cls(
            rows=rows,
            cols=len(cleaned),
            columns=cleaned,
            row_labels=tuple(row_labels) if row_labels is not None else None,
            col_labels=tuple(col_labels) if col_labels is not None else None,
        )

    @classmethod
    def from_rows(
        cls, data: Sequence[Sequence[Fraction | int | str]], cols: int | None = None
    ) -> Self:
        """Build from a dense row-major grid; ``cols`` is needed only for 0-row matrices."""

        n_cols = len(data[0]) if data else (cols or 0)
        if any(len(row) != n_cols for row in data):
            raise ValueError("ragged rows")
        columns = [{i: row[j] for i, row in enumerate(data)} for j in range(n_cols)]
        return cls.from_columns(columns, len(data))

    @classmethod
    def from_row_dicts(cls, rows: Sequence[Mapping[int, Fraction]], cols: int) -> Self:
        columns: list[dict[int, Fraction]] = [{} for _ in range(cols)]
        for i, row in enumerate(rows):
            for j, value in row.items():
                columns[j][i] = value
        return cls.from_columns(columns, len(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Self:
        return cls(rows=rows, cols=cols, columns=((),) * cols)

    @classmethod
    def identity(cls, n: int) -> Self:
        return cls.from_columns(({j: 1} for j in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> Vector:
        return dict(self.columns[j])

    def entry(self, i: int, j: int) -> Fraction:
        return dict(self.columns[j]).get(i, Fraction(0))

    def row_dicts(self) -> list[Vector]:
        out: list[Vector] = [{} for _ in range(self.rows)]
        for j, column in enumerate(self.columns):
            for i, value in column:
                out[i][j] = value
        return out

    def to_rows(self) -> list[list[Fraction]]:
        grid = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for j, column in enumerate(self.columns):
            for i, value in column:
                grid[i][j] = value
        return grid

    def is_zero(self) -> bool:
        return not any(self.columns)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix.from_columns(
            self.row_dicts(),
            self.cols,
            row_labels=self.col_labels,
            col_labels=self.row_labels,
        )

    def apply(self, vector: Mapping[int, Fraction]) -> Vector:
        """Return ``self @ vector`` for a sparse column vector."""

        out: Vector = {}
        for j, coefficient in vector.items():
            if not coefficient:
                continue
            for i, value in self.columns[j]:
                updated = out.get(i, Fraction(0)) + value * coefficient
                if updated:
                    out[i] = updated
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix.from_columns(
            (self.apply(dict(column)) for column in other.columns),
            self.rows,
            row_labels=self.row_labels,
            col_labels=other.col_labels,
        )

    def hstack(self, *others: ExactMatrix) -> ExactMatrix:
        columns = list(self.columns)
        for other in others:
            if other.rows != self.rows:
                raise ValueError("hstack needs equal row counts")
            columns.extend(other.columns)
        return ExactMatrix(rows=self.rows, cols=len(columns), columns=tuple(columns))

    def vstack(self, *others: ExactMatrix) -> ExactMatrix:
        merged = [dict(column) for column in self.columns]
        offset = self.rows
        for other in others:
            if other.cols != self.cols:
                raise ValueError("vstack needs equal column counts")
            for j, column in enumerate(other.columns):
                merged[j].update((i + offset, value) for i, value in column)
            offset += other.rows
        return ExactMatrix.from_columns(merged, offset, col_labels=self.col_labels)

    def pad_rows(self, rows: int, *, row_labels: Sequence[object] | None = None) -> ExactMatrix:
        """Append zero rows up to ``rows``."""

        if rows < self.rows:
            raise ValueError(f"cannot pad {self.rows} rows down to {rows}")
        return ExactMatrix(
            rows=rows,
            cols=self.cols,
            columns=self.columns,
            row_labels=tuple(row_labels) if row_labels is not None else None,
            col_labels=self.col_labels,
        )

    def select_columns(self, indices: Iterable[int]) -> ExactMatrix:
        chosen = list(indices)
        labels = (
            tuple(self.col_labels[j] for j in chosen) if self.col_labels is not None else None
        )
        return ExactMatrix(
            rows=self.rows,
            cols=len(chosen),
            columns=tuple(self.columns[j] for j in chosen),
            row_labels=self.row_labels,
            col_labels=labels,
        )

    def scaled_columns(self, scale: Fraction) -> ExactMatrix:
        return ExactMatrix.from_columns(
            ({i: value * scale for i, value in column} for column in self.columns),
            self.rows,
            row_labels=self.row_labels,
            col_labels=self.col_labels,
        )


class Echelon(NamedTuple):
    reduced: ExactMatrix
    rank: int
    pivot_columns: tuple[int, ...]


def _resolve(backend: EliminationBackend | str | None) -> EliminationBackend:
    if backend is None or isinstance(backend, str):
        return get_backend(backend)
    return backend


def echelon(matrix: ExactMatrix, *, backend: EliminationBackend | str | None = None) -> Echelon:
    """Reduced row echelon form; zero rows are kept at the bottom so the shape is unchanged."""

    result = _resolve(backend).rref(matrix.row_dicts(), matrix.cols)
    rows = list(result.rows) + [{} for _ in range(matrix.rows - len(result.rows))]
    reduced = ExactMatrix.from_row_dicts(rows, matrix.cols)
    return Echelon(reduced=reduced, rank=len(result.pivots), pivot_columns=result.pivots)


def rank(matrix: ExactMatrix, *, backend: EliminationBackend | str | None = None) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return len(_resolve(backend).rref(matrix.row_dicts(), matrix.cols).pivots)


def kernel_basis(
    matrix: ExactMatrix, *, backend: EliminationBackend | str | None = None
) -> ExactMatrix:
    """Canonical kernel basis.

    Each free column in increasing order contributes one basis vector with a 1 in that
    position and the back-substituted pivot values elsewhere.
    """

    result = _resolve(backend).rref(matrix.row_dicts(), matrix.cols)
    pivot_set = set(result.pivots)
    columns: list[Vector] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector: Vector = {free: Fraction(1)}
        for row, pivot in zip(result.rows, result.pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        columns.append(vector)
    return ExactMatrix.from_columns(columns, matrix.cols, row_labels=matrix.col_labels)


def solve(
    a: ExactMatrix,
    b: Mapping[int, Fraction] | Sequence[Fraction | int],
    *,
    backend: EliminationBackend | str | None = None,
) -> Vector | None:
    """Some ``x`` with ``a @ x == b`` (free variables zero), or ``None`` if inconsistent."""

    rhs: Mapping[int, Fraction | int]
    if isinstance(b, Mapping):
        rhs = b
    else:
        if len(b) != a.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
        rhs = {i: value for i, value in enumerate(b) if value}
    if any(not 0 <= i < a.rows for i in rhs):
        raise IndexError("right-hand side index outside the row range")

    augmented = a.row_dicts()
    for i, value in rhs.items():
        if value:
            augmented[i][a.cols] = as_scalar(value)
    result = _resolve(backend).rref(augmented, a.cols + 1)
    if result.pivots and result.pivots[-1] == a.cols:
        return None
    return {
        pivot: row[a.cols]
        for row, pivot in zip(result.rows, result.pivots)
        if row.get(a.cols)
    }


def intersection_dim(
    a: ExactMatrix, b: ExactMatrix, *, backend: EliminationBackend | str | None = None
) -> int:
    """dim(colspace a ∩ colspace b) = rank a + rank b - rank [a|b]."""

    if a.rows != b.rows:
        raise ValueError(f"row counts differ: {a.rows} != {b.rows}")
    return (
        rank(a, backend=backend)
        + rank(b, backend=backend)
        - rank(a.hstack(b), backend=backend)
    )


def intersection_dim_via_kernel(
    a: ExactMatrix, b: ExactMatrix, *, backend: EliminationBackend | str | None = None
) -> int:
    """Same quantity as :func:`intersection_dim` through the kernel of ``[a | -b]``."""

    if a.rows != b.rows:
        raise ValueError(f"row counts differ: {a.rows} != {b.rows}")
    kernel = kernel_basis(a.hstack(b.scaled_columns(Fraction(-1))), backend=backend)
    top = ExactMatrix.from_columns(
        ({i: value for i, value in column if i < a.cols} for column in kernel.columns),
        a.cols,
    )
    return rank(a @ top, backend=backend)


def column_space_extension(
    span: ExactMatrix, candidates: ExactMatrix, *, backend: EliminationBackend | str | None = None
) -> list[int]:
    """Indices of ``candidates`` columns that extend a basis of colspace(``span``).

    The chosen columns together with ``span`` span colspace(``span``) + colspace(``candidates``).
    """

    if span.rows != candidates.rows:
        raise ValueError("row counts differ")
    stacked = span.hstack(candidates)
    pivots = _resolve(backend).rref(stacked.row_dicts(), stacked.cols)
    return [pivot - span.cols for pivot in pivots.pivots if pivot >= span.cols]


class IncrementalRank:
    """Rank of a growing list of rows, updated one row at a time."""

    def __init__(self) -> None:
        self._reducer = IntegerRowReducer()

    @property
    def rank(self) -> int:
        return self._reducer.rank

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert ``row``; ``True`` when it raised the rank."""

        return self._reducer.insert(row) is not None
