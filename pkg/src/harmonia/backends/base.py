"""Backend interfaces and shared types for exact elimination."""

from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import NamedTuple, Protocol

SparseRow = dict[int, Fraction]


class RrefResult(NamedTuple):
    """Nonzero rows of the reduced row echelon form and their pivot columns.

    Rows are ordered by pivot column; every pivot entry is 1.
    """

    rows: tuple[SparseRow, ...]
    pivots: tuple[int, ...]


class EliminationBackend(Protocol):
    """Protocol defining an exact Gauss-Jordan implementation."""

    name: str

    def rref(self, rows: Sequence[Mapping[int, Fraction]], n_cols: int) -> RrefResult:
        """Return the reduced row echelon form of the matrix given by sparse ``rows``."""

        ...
