"""Fraction-free sparse Gauss-Jordan elimination on integer rows."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from fractions import Fraction

from .base import RrefResult, SparseRow

IntRow = dict[int, int]


def _integral(row: Mapping[int, Fraction | int]) -> IntRow:
    """Scale a rational row to a primitive integer row with the same span."""

    values = {col: Fraction(value) for col, value in row.items() if value}
    if not values:
        return {}
    denominator = math.lcm(*(value.denominator for value in values.values()))
    scaled = {col: int(value * denominator) for col, value in values.items()}
    return _primitive(scaled)


def _primitive(row: IntRow) -> IntRow:
    divisor = math.gcd(*row.values()) if row else 1
    if divisor > 1:
        return {col: value // divisor for col, value in row.items()}
    return row


def _eliminate(target: IntRow, pivot_row: IntRow, column: int) -> IntRow:
    """Clear ``target[column]`` with an integer combination of ``target`` and ``pivot_row``."""

    pivot_value = pivot_row[column]
    target_value = target[column]
    divisor = math.gcd(pivot_value, target_value)
    keep = pivot_value // divisor
    drop = target_value // divisor
    combined = {col: keep * value for col, value in target.items()}
    for col, value in pivot_row.items():
        updated = combined.get(col, 0) - drop * value
        if updated:
            combined[col] = updated
        else:
            combined.pop(col, None)
    return _primitive(combined)


class IntegerRowReducer:
    """Reduced echelon form maintained under row insertion.

    Every stored row is primitive and zero on all other pivot columns.
    """

    def __init__(self) -> None:
        self._rows: dict[int, IntRow] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def insert(self, row: Mapping[int, Fraction | int]) -> int | None:
        """Add ``row``; return its new pivot column or ``None`` when it is dependent."""

        work = _integral(row)
        for column in [col for col in work if col in self._rows]:
            work = _eliminate(work, self._rows[column], column)
        if not work:
            return None

        lead = min(work)
        for pivot, stored in self._rows.items():
            if lead in stored:
                self._rows[pivot] = _eliminate(stored, work, lead)
        self._rows[lead] = work
        return lead

    def result(self) -> RrefResult:
        pivots = tuple(sorted(self._rows))
        rows: list[SparseRow] = []
        for pivot in pivots:
            stored = self._rows[pivot]
            scale = stored[pivot]
            rows.append({col: Fraction(value, scale) for col, value in sorted(stored.items())})
        return RrefResult(rows=tuple(rows), pivots=pivots)


class SparseBackend:
    """Default backend: exact, sparse, no third-party arithmetic."""

    name = "sparse"

    def rref(self, rows: Sequence[Mapping[int, Fraction]], n_cols: int) -> RrefResult:
        reducer = IntegerRowReducer()
        for row in rows:
            if any(col < 0 or col >= n_cols for col in row):
                raise IndexError(f"column index outside 0..{n_cols - 1}")
            reducer.insert(row)
        return reducer.result()
