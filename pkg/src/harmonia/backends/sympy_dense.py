"""Dense elimination through sympy's ``DomainMatrix`` over ``QQ``."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .base import RrefResult, SparseRow


class DenseBackend:
    """Backend used to cross-check the sparse path; identical output by uniqueness of RREF."""

    name = "dense"

    def rref(self, rows: Sequence[Mapping[int, Fraction]], n_cols: int) -> RrefResult:
        if not rows or n_cols == 0:
            return RrefResult(rows=(), pivots=())

        dense = [[QQ.zero] * n_cols for _ in rows]
        for i, row in enumerate(rows):
            for col, value in row.items():
                if not 0 <= col < n_cols:
                    raise IndexError(f"column index outside 0..{n_cols - 1}")
                value = Fraction(value)
                dense[i][col] = QQ(value.numerator, value.denominator)

        matrix = DomainMatrix(dense, (len(rows), n_cols), QQ)
        reduced, pivots = matrix.rref()
        entries = reduced.to_Matrix()

        out: list[SparseRow] = []
        for i, _pivot in enumerate(pivots):
            row: SparseRow = {}
            for col in range(n_cols):
                entry = entries[i, col]
                if entry != 0:
                    row[col] = Fraction(int(entry.p), int(entry.q))
            out.append(row)
        return RrefResult(rows=tuple(out), pivots=tuple(int(p) for p in pivots))
