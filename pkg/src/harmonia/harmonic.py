"""Harmonic cycles of a growing complex and the barcodes built from them.

A harmonic ``p``-cycle of ``K_t`` is a chain with zero boundary and zero coboundary in
``K_t``. The canonical barcode is read off the table

    r[i][j] = dim(Har_p(K_{t_i}) ∩ Har_p(K_{t_j})),

where cycles of the older complex are padded with zeros on later simplices. The
subordinate barcode instead follows one persistence representative per bar and
splits the bar whenever the representative stops being harmonic.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .complex import (
    INF,
    Filtration,
    Simplex,
    TimeValue,
    boundary_matrix,
    coboundary_matrix,
)
from .errors import InternalInvariantViolation, NotACycle, RepairInfeasible, ZeroChain
from .exactla import (
    EliminationBackend,
    ExactMatrix,
    IncrementalRank,
    column_space_extension,
    intersection_dim,
    kernel_basis,
    solve,
)
from .parallel import parallel_map
from .persistence import Bar, Barcode, Chain, persistence_barcode
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("harmonic")

BackendArg = EliminationBackend | str | None
RankMethod = Literal["coboundary", "intersection"]


@dataclass(frozen=True)
class HarmonicBasis:
    """Columns spanning ``Har_p(K_t)`` in the coordinates of the ``p``-simplices at ``t``."""

    time: Fraction
    dimension: int
    matrix: ExactMatrix
    simplices: tuple[Simplex, ...]

    @property
    def h(self) -> int:
        return self.matrix.cols

    def chains(self) -> list[Chain]:
        return [
            Chain.from_vector(self.dimension, self.simplices, dict(column))
            for column in self.matrix.columns
        ]

    def padded(self, rows: int) -> ExactMatrix:
        return self.matrix.pad_rows(rows)


@dataclass(frozen=True)
class HarmonicSpan:
    """``[start, end)``; ``end == start`` is the empty span."""

    start: Fraction
    end: TimeValue

    @property
    def is_empty(self) -> bool:
        return self.end == self.start

    @property
    def length(self) -> TimeValue:
        return self.end - self.start

    def contains(self, start: Fraction, end: TimeValue) -> bool:
        return not self.is_empty and self.start <= start and end <= self.end


@dataclass(frozen=True)
class RankTable:
    """Upper-triangular ``r[i][j]`` over critical times, stored row by row from the diagonal."""

    dimension: int
    times: tuple[Fraction, ...]
    rows: tuple[tuple[int, ...], ...]

    def r(self, i: int, j: int) -> int:
        """Table entry with ``r(-1, j) = 0``; indices are 0-based."""

        if i < 0:
            return 0
        if j < i:
            raise IndexError(f"r({i}, {j}) lies below the diagonal")
        return self.rows[i][j - i]

    @property
    def h(self) -> tuple[int, ...]:
        return tuple(row[0] for row in self.rows)

    def check(self) -> None:
        """Raise :class:`InternalInvariantViolation` unless the table is monotone and bounded."""

        h = self.h
        m = len(self.times)
        for i in range(m):
            for j in range(i, m):
                value = self.r(i, j)
                if value > min(h[i], h[j]) or value < 0:
                    raise InternalInvariantViolation(f"r({i},{j})={value} outside 0..min(h)")
                if j > i and value > self.r(i, j - 1):
                    raise InternalInvariantViolation(f"r({i},·) increases at j={j}")
                if value < self.r(i - 1, j):
                    raise InternalInvariantViolation(f"r(·,{j}) decreases at i={i}")


def harmonic_basis(
    filtration: Filtration, p: int, t: Fraction, *, backend: BackendArg = None
) -> HarmonicBasis:
    """Kernel of ``[∂_p(t); δ^p(t)]``."""

    if t not in filtration.critical_times:
        raise ValueError(f"{t} is not a critical time")
    simplices = filtration.simplices_at(p, t)
    stacked = boundary_matrix(filtration, p, t).vstack(coboundary_matrix(filtration, p, t))
    kernel = kernel_basis(stacked, backend=backend)
    return HarmonicBasis(time=t, dimension=p, matrix=kernel, simplices=simplices)


def _check_cycle(filtration: Filtration, z: Chain) -> None:
    if z.is_zero():
        raise ZeroChain("the zero chain has no harmonic span")
    missing = [simplex for simplex in z.support if simplex not in filtration]
    if missing:
        raise ValueError(f"chain support {missing[0]} is not in the filtration")
    if not z.is_cycle():
        raise NotACycle(f"∂z ≠ 0 for z = {z}")


def harmonic_span(filtration: Filtration, z: Chain) -> HarmonicSpan:
    """The interval during which ``z`` is a nonzero harmonic cycle.

    ``z`` appears at the latest time on its support and stops being harmonic at the
    first arrival of a coface with nonzero coboundary coefficient; that coefficient
    never changes afterwards.
    """

    _check_cycle(filtration, z)
    start = max(filtration.time_of(simplex) for simplex in z.support)
    coboundary = z.coboundary(filtration)
    if not coboundary:
        return HarmonicSpan(start, INF)
    first = min(filtration.time_of(coface) for coface in coboundary)
    if first <= start:
        return HarmonicSpan(start, start)
    return HarmonicSpan(start, first)


def _harmonic_correction(
    filtration: Filtration, z: Chain, t: Fraction, backend: BackendArg
) -> Chain | None:
    """``z + ∂x`` with ``δ_t(z + ∂x) = 0``, or ``None`` when the system is inconsistent."""

    p = z.dimension
    simplices = filtration.simplices_at(p, t)
    upper = boundary_matrix(filtration, p + 1, t)
    if upper.cols == 0:
        return z
    vector = z.to_vector(simplices)
    coboundary = upper.transpose()
    rhs = {k: -value for k, value in coboundary.apply(vector).items()}
    if not rhs:
        return z
    x = solve(coboundary @ upper, rhs, backend=backend)
    if x is None:
        return None
    corrected = dict(vector)
    for k, value in upper.apply(x).items():
        corrected[k] = corrected.get(k, Fraction(0)) + value
    return Chain.from_vector(p, simplices, corrected)


def harmonic_projection(
    filtration: Filtration, z: Chain, t: Fraction, *, backend: BackendArg = None
) -> Chain:
    """The harmonic cycle homologous to ``z`` in ``K_t`` (zero when ``z`` bounds)."""

    if z.is_zero():
        return z
    if not z.is_cycle():
        raise NotACycle(f"∂z ≠ 0 for z = {z}")
    present = set(filtration.simplices_at(z.dimension, t))
    if any(simplex not in present for simplex in z.support):
        raise ValueError(f"chain is not supported in K_{t}")
    projected = _harmonic_correction(filtration, z, t, backend)
    if projected is None:
        raise InternalInvariantViolation("normal equations of the projection are inconsistent")
    return projected


def _rank_row_coboundary(
    filtration: Filtration, p: int, i: int, basis: HarmonicBasis, coboundary: ExactMatrix
) -> tuple[int, ...]:
    times = filtration.critical_times
    images = coboundary @ basis.padded(filtration.count_at(p))
    rows = images.row_dicts()
    tracker = IncrementalRank()
    consumed = 0
    out: list[int] = []
    for j in range(i, len(times)):
        limit = filtration.count_at(p + 1, times[j])
        while consumed < limit:
            tracker.add(rows[consumed])
            consumed += 1
        out.append(basis.h - tracker.rank)
    return tuple(out)


def _rank_row_intersection(
    filtration: Filtration,
    p: int,
    i: int,
    bases: Sequence[HarmonicBasis],
    backend: BackendArg,
) -> tuple[int, ...]:
    out: list[int] = []
    for j in range(i, len(bases)):
        rows = filtration.count_at(p, bases[j].time)
        out.append(intersection_dim(bases[i].padded(rows), bases[j].matrix, backend=backend))
    return tuple(out)


def harmonic_bases(
    filtration: Filtration, p: int, *, backend: BackendArg = None, n_jobs: int | None = None
) -> list[HarmonicBasis]:
    """One basis per critical time, in time order."""

    return parallel_map(
        lambda t: harmonic_basis(filtration, p, t, backend=backend),
        filtration.critical_times,
        n_jobs,
    )


def rank_table(
    filtration: Filtration,
    p: int,
    *,
    method: RankMethod = "coboundary",
    bases: Sequence[HarmonicBasis] | None = None,
    backend: BackendArg = None,
    n_jobs: int | None = None,
) -> RankTable:
    """``r[i][j]`` for every pair of critical times ``i <= j``.

    ``coboundary`` uses ``r[i][j] = h_i - rank(δ^p(t_j) · pad(H_i))``: a padded cycle of
    ``K_{t_i}`` is a cycle of ``K_{t_j}``, so it is harmonic there exactly when its
    coboundary vanishes. ``intersection`` evaluates the rank formula for the subspace
    intersection directly.
    """

    if bases is None:
        bases = harmonic_bases(filtration, p, backend=backend, n_jobs=n_jobs)
    indices = list(range(len(bases)))
    if method == "coboundary":
        coboundary = coboundary_matrix(filtration, p)
        rows = parallel_map(
            lambda i: _rank_row_coboundary(filtration, p, i, bases[i], coboundary),
            indices,
            n_jobs,
        )
    elif method == "intersection":
        rows = parallel_map(
            lambda i: _rank_row_intersection(filtration, p, i, bases, backend),
            indices,
            n_jobs,
        )
    else:
        raise ValueError(f"unknown rank table method: {method!r}")

    table = RankTable(dimension=p, times=filtration.critical_times, rows=tuple(rows))
    LOGGER.debug("Rangtabelle p=%s: h=%s", p, table.h)
    return table


def _multiplicities(table: RankTable) -> list[tuple[int, int | None, int]]:
    """``(i, j, count)`` cohorts; ``j is None`` for bars that never die."""

    m = len(table.times)
    r = table.r
    cohorts: list[tuple[int, int | None, int]] = []
    for i in range(m):
        for j in range(i + 1, m):
            count = (r(i, j - 1) - r(i, j)) - (r(i - 1, j - 1) - r(i - 1, j))
            if count < 0:
                raise InternalInvariantViolation(f"negative multiplicity {count} at ({i}, {j})")
            if count:
                cohorts.append((i, j, count))
        count = r(i, m - 1) - r(i - 1, m - 1)
        if count < 0:
            raise InternalInvariantViolation(f"negative multiplicity {count} at ({i}, inf)")
        if count:
            cohorts.append((i, None, count))
    return cohorts


class _SurvivorSpaces:
    """Bases of ``W(i, j) = Har(K_{t_i}) ∩ Har(K_{t_j})`` in final ``p``-coordinates."""

    def __init__(
        self,
        filtration: Filtration,
        p: int,
        bases: Sequence[HarmonicBasis],
        backend: BackendArg,
    ) -> None:
        self._filtration = filtration
        self._p = p
        self._bases = bases
        self._backend = backend
        self._rows = filtration.count_at(p)
        self._coboundary = coboundary_matrix(filtration, p)
        self._cache: dict[tuple[int, int], ExactMatrix] = {}

    def get(self, i: int, j: int) -> ExactMatrix:
        if i < 0:
            return ExactMatrix.zeros(self._rows, 0)
        key = (i, j)
        if key not in self._cache:
            padded = self._bases[i].padded(self._rows)
            limit = self._filtration.count_at(self._p + 1, self._filtration.critical_times[j])
            images = self._coboundary @ padded
            restricted = ExactMatrix.from_columns(
                ({k: v for k, v in column if k < limit} for column in images.columns), limit
            )
            self._cache[key] = padded @ kernel_basis(restricted, backend=self._backend)
        return self._cache[key]


def canonical_barcode(
    filtration: Filtration,
    p: int,
    *,
    table: RankTable | None = None,
    representatives: bool = False,
    backend: BackendArg = None,
    n_jobs: int | None = None,
) -> Barcode:
    """Canonical barcode of harmonic chains in dimension ``p``.

    Cohort ``(i, j)`` holds ``(r[i][j-1] - r[i][j]) - (r[i-1][j-1] - r[i-1][j])`` bars
    ``[t_i, t_j)`` and cohort ``(i, ∞)`` holds ``r[i][m] - r[i-1][m]`` bars ``[t_i, ∞)``.
    With ``representatives`` each bar carries a cycle whose harmonic span is the bar.
    """

    times = filtration.critical_times
    if not times:
        return Barcode(p)
    bases: Sequence[HarmonicBasis] | None = None
    if table is None or representatives:
        bases = harmonic_bases(filtration, p, backend=backend, n_jobs=n_jobs)
    if table is None:
        table = rank_table(filtration, p, bases=bases, backend=backend, n_jobs=n_jobs)
    table.check()

    cohorts = _multiplicities(table)
    bars: list[Bar] = []
    reps: list[Chain | None] = []
    survivors = (
        _SurvivorSpaces(filtration, p, bases, backend)
        if representatives and bases is not None
        else None
    )
    last = len(times) - 1
    for i, j, count in cohorts:
        death: TimeValue = INF if j is None else times[j]
        bars.extend(Bar(p, times[i], death) for _ in range(count))
        if survivors is None:
            continue
        if j is None:
            candidates = survivors.get(i, last)
            span = survivors.get(i - 1, last)
        else:
            candidates = survivors.get(i, j - 1)
            span = survivors.get(i - 1, j - 1).hstack(survivors.get(i, j))
        chosen = column_space_extension(span, candidates, backend=backend)
        if len(chosen) != count:
            raise InternalInvariantViolation(
                f"cohort ({i}, {j}) has {count} bars but {len(chosen)} new cycles"
            )
        simplices = filtration.simplices(p)
        reps.extend(Chain.from_vector(p, simplices, candidates.column(k)) for k in chosen)

    barcode = Barcode.build(p, bars, reps if representatives else None)
    for t, h in zip(times, table.h):
        if barcode.alive_at(t) != h:
            raise InternalInvariantViolation(
                f"{barcode.alive_at(t)} canonical bars alive at {t}, expected {h}"
            )
    LOGGER.info("Kanonischer Barcode p=%s: %s Balken", p, len(barcode))
    return barcode


@dataclass(frozen=True)
class SubordinateBar:
    """A piece ``[birth, death)`` of a persistence bar with a representative harmonic on it."""

    parent: Bar
    birth: Fraction
    death: TimeValue
    representative: Chain

    def as_bar(self) -> Bar:
        return Bar(self.parent.dimension, self.birth, self.death)


def subordinate_barcode(
    filtration: Filtration,
    p: int,
    basis: Barcode | None = None,
    *,
    backend: BackendArg = None,
) -> list[SubordinateBar]:
    """Split every persistence bar where its representative stops being harmonic.

    The representative is projected to a harmonic cycle at the bar's birth. At each later
    critical time before the death where the coboundary becomes nonzero the current piece
    ends and the representative is repaired to ``z + ∂x`` with ``δ_t(z + ∂x) = 0``.
    """

    if basis is None:
        basis = persistence_barcode(filtration, p)
    if basis.representatives is None:
        raise ValueError("the persistence basis needs representatives")

    pieces: list[SubordinateBar] = []
    for bar, representative in zip(basis.bars, basis.representatives):
        if representative is None:
            raise ValueError(f"bar {bar} has no representative")
        current = harmonic_projection(filtration, representative, bar.birth, backend=backend)
        if current.is_zero():
            raise InternalInvariantViolation(f"representative of {bar} is a boundary at birth")
        start = bar.birth
        for t in filtration.critical_times:
            if t <= bar.birth or not t < bar.death:
                continue
            if not current.coboundary(filtration, t):
                continue
            pieces.append(SubordinateBar(bar, start, t, current))
            repaired = _harmonic_correction(filtration, current, t, backend)
            if repaired is None or repaired.is_zero():
                raise RepairInfeasible(f"no harmonic repair for {bar} at {t}")
            LOGGER.debug("Reparatur von %s bei t=%s", bar, t)
            current = repaired
            start = t
        pieces.append(SubordinateBar(bar, start, bar.death, current))
    return pieces


def subordinate_as_barcode(pieces: Sequence[SubordinateBar], p: int) -> Barcode:
    return Barcode.build(
        p, (piece.as_bar() for piece in pieces), (piece.representative for piece in pieces)
    )


def is_span_final(filtration: Filtration, z: Chain) -> bool:
    """Full scan: once ``δ_t(z) ≠ 0`` it stays nonzero at every later critical time."""

    start = max(filtration.time_of(simplex) for simplex in z.support)
    dead = False
    for t in filtration.critical_times:
        if t < start:
            continue
        nonzero = bool(z.coboundary(filtration, t))
        if dead and not nonzero:
            return False
        dead = dead or nonzero
    return True


__all__ = [
    "HarmonicBasis",
    "HarmonicSpan",
    "RankTable",
    "SubordinateBar",
    "canonical_barcode",
    "harmonic_basis",
    "harmonic_bases",
    "harmonic_projection",
    "harmonic_span",
    "is_span_final",
    "rank_table",
    "subordinate_as_barcode",
    "subordinate_barcode",
]
