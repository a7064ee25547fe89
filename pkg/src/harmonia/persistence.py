"""Persistence barcodes by standard column reduction, with representative cycles."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from typing_extensions import Self

from .complex import INF, Filtration, Infinity, Simplex, TimeValue, boundary_matrix, format_time
from .errors import DimensionMismatch
from .exactla import EliminationBackend, ExactMatrix, Vector, rank, solve
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("persistence")


@dataclass(frozen=True)
class Chain:
    """A ``p``-chain with rational coefficients; zero coefficients are never stored."""

    dimension: int
    terms: tuple[tuple[Simplex, Fraction], ...] = ()

    def __post_init__(self) -> None:
        for simplex, coefficient in self.terms:
            if simplex.dimension != self.dimension:
                raise DimensionMismatch(self.dimension, simplex.dimension)
            if not coefficient:
                raise ValueError(f"zero coefficient stored for {simplex}")

    @classmethod
    def from_mapping(
        cls, dimension: int, mapping: Mapping[Simplex, Fraction | int | str]
    ) -> Self:
        terms = ((simplex, Fraction(value)) for simplex, value in mapping.items())
        return cls(dimension, tuple(sorted((s, c) for s, c in terms if c)))

    @classmethod
    def from_vector(
        cls, dimension: int, simplices: Sequence[Simplex], vector: Mapping[int, Fraction]
    ) -> Self:
        return cls.from_mapping(dimension, {simplices[i]: value for i, value in vector.items()})

    def as_dict(self) -> dict[Simplex, Fraction]:
        return dict(self.terms)

    def coefficient(self, simplex: Simplex) -> Fraction:
        return self.as_dict().get(simplex, Fraction(0))

    @property
    def support(self) -> tuple[Simplex, ...]:
        return tuple(simplex for simplex, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def to_vector(self, simplices: Sequence[Simplex]) -> Vector:
        position = {simplex: k for k, simplex in enumerate(simplices)}
        try:
            return {position[simplex]: value for simplex, value in self.terms}
        except KeyError as exc:
            raise ValueError(f"chain support {exc.args[0]} outside the given simplices") from None

    def _combine(self, other: Chain, factor: Fraction) -> Chain:
        if other.dimension != self.dimension:
            raise DimensionMismatch(self.dimension, other.dimension)
        merged = self.as_dict()
        for simplex, value in other.terms:
            merged[simplex] = merged.get(simplex, Fraction(0)) + factor * value
        return Chain.from_mapping(self.dimension, merged)

    def __add__(self, other: Chain) -> Chain:
        return self._combine(other, Fraction(1))

    def __sub__(self, other: Chain) -> Chain:
        return self._combine(other, Fraction(-1))

    def __neg__(self) -> Chain:
        return self.scale(Fraction(-1))

    def scale(self, factor: Fraction | int) -> Chain:
        return Chain.from_mapping(
            self.dimension, {simplex: value * factor for simplex, value in self.terms}
        )

    def dot(self, other: Chain) -> Fraction:
        mine = self.as_dict()
        return sum((mine.get(s, Fraction(0)) * c for s, c in other.terms), Fraction(0))

    def norm_squared(self) -> Fraction:
        return sum((c * c for _, c in self.terms), Fraction(0))

    def boundary(self) -> dict[Simplex, Fraction]:
        """``∂`` of the chain as a sparse map on ``(p-1)``-simplices."""

        out: dict[Simplex, Fraction] = {}
        for simplex, coefficient in self.terms:
            for sign, face in simplex.boundary_terms():
                value = out.get(face, Fraction(0)) + sign * coefficient
                if value:
                    out[face] = value
                else:
                    out.pop(face, None)
        return out

    def is_cycle(self) -> bool:
        return not self.boundary()

    def coboundary(
        self, filtration: Filtration, t: TimeValue | None = None
    ) -> dict[Simplex, Fraction]:
        """``δ`` of the chain in ``K_t``, as a map on ``(p+1)``-simplices."""

        mine = self.as_dict()
        out: dict[Simplex, Fraction] = {}
        for coface in filtration.simplices_at(self.dimension + 1, t):
            value = sum(
                (sign * mine.get(face, Fraction(0)) for sign, face in coface.boundary_terms()),
                Fraction(0),
            )
            if value:
                out[coface] = value
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_time(c)}*{s}" for s, c in self.terms)


@dataclass(frozen=True)
class Bar:
    """Half-open interval ``[birth, death)`` in homology dimension ``dimension``."""

    dimension: int
    birth: Fraction
    death: TimeValue

    def __post_init__(self) -> None:
        if isinstance(self.birth, Infinity):
            raise ValueError("birth must be finite")
        if not self.birth < self.death:
            raise ValueError(f"empty bar [{self.birth}, {self.death})")

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.death, Infinity)

    @property
    def length(self) -> TimeValue:
        return self.death - self.birth

    def alive_at(self, t: Fraction) -> bool:
        return self.birth <= t < self.death

    def sort_key(self) -> tuple[Fraction, TimeValue]:
        return (self.birth, self.death)

    def __str__(self) -> str:
        return f"[{format_time(self.birth)}, {format_time(self.death)})"


@dataclass(frozen=True)
class Barcode:
    """Multiset of bars of one dimension, each with an optional representative."""

    dimension: int
    bars: tuple[Bar, ...] = ()
    representatives: tuple[Chain | None, ...] | None = None

    def __post_init__(self) -> None:
        for bar in self.bars:
            if bar.dimension != self.dimension:
                raise DimensionMismatch(self.dimension, bar.dimension)
        if self.representatives is not None and len(self.representatives) != len(self.bars):
            raise ValueError("one representative slot per bar is required")

    @classmethod
    def build(
        cls,
        dimension: int,
        bars: Iterable[Bar],
        representatives: Iterable[Chain | None] | None = None,
    ) -> Self:
        """Sort bars by (birth, death), carrying representatives along."""

        bar_list = list(bars)
        if representatives is None:
            return cls(dimension, tuple(sorted(bar_list, key=Bar.sort_key)))
        paired = sorted(
            zip(bar_list, representatives, strict=True), key=lambda item: item[0].sort_key()
        )
        return cls(
            dimension,
            tuple(bar for bar, _ in paired),
            tuple(rep for _, rep in paired),
        )

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self) -> Iterator[Bar]:
        return iter(self.bars)

    def multiset(self) -> Counter[tuple[Fraction, TimeValue]]:
        return Counter((bar.birth, bar.death) for bar in self.bars)

    def alive_at(self, t: Fraction) -> int:
        return sum(1 for bar in self.bars if bar.alive_at(t))

    def finite(self) -> list[Bar]:
        return [bar for bar in self.bars if not bar.is_infinite]

    def infinite(self) -> list[Bar]:
        return [bar for bar in self.bars if bar.is_infinite]

    def same_bars(self, other: Barcode) -> bool:
        return self.dimension == other.dimension and self.multiset() == other.multiset()


class PersistencePair(NamedTuple):
    birth: int
    death: int | None


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of the column reduction over all simplices in column order."""

    filtration: Filtration
    pairs: tuple[PersistencePair, ...]
    reduced: ExactMatrix
    representatives: Mapping[int, Chain]

    def simplex(self, column: int) -> Simplex:
        return self.filtration.entries[column][0]

    def time(self, column: int) -> Fraction:
        return self.filtration.entries[column][1]


def _axpy(target: Vector, source: Mapping[int, Fraction], factor: Fraction) -> None:
    for key, value in source.items():
        updated = target.get(key, Fraction(0)) + factor * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def _to_chain(filtration: Filtration, vector: Mapping[int, Fraction]) -> Chain:
    entries = filtration.entries
    dimension = entries[next(iter(vector))][0].dimension
    return Chain.from_mapping(dimension, {entries[k][0]: value for k, value in vector.items()})


def reduce(filtration: Filtration) -> ReductionResult:
    """Standard left-to-right reduction of the full boundary matrix.

    A finite bar's representative is the reduced column of its death simplex, a cycle
    carried by ``K_birth``. An infinite bar's representative is the recorded column
    operations at its birth column.
    """

    entries = filtration.entries
    position = {simplex: k for k, (simplex, _) in enumerate(entries)}
    reduced: list[Vector] = []
    operations: list[Vector] = []
    low_owner: dict[int, int] = {}

    for j, (simplex, _) in enumerate(entries):
        column: Vector = {
            position[face]: Fraction(sign) for sign, face in simplex.boundary_terms()
        }
        operation: Vector = {j: Fraction(1)}
        while column:
            low = max(column)
            owner = low_owner.get(low)
            if owner is None:
                break
            factor = -column[low] / reduced[owner][low]
            _axpy(column, reduced[owner], factor)
            _axpy(operation, operations[owner], factor)
        reduced.append(column)
        operations.append(operation)
        if column:
            low_owner[max(column)] = j

    pairs: list[PersistencePair] = []
    representatives: dict[int, Chain] = {}
    for j, column in enumerate(reduced):
        if column:
            continue
        death = low_owner.get(j)
        pairs.append(PersistencePair(j, death))
        if death is not None:
            representatives[j] = _to_chain(filtration, reduced[death])
        else:
            representatives[j] = _to_chain(filtration, operations[j])

    LOGGER.debug("Reduktion abgeschlossen: %s Spalten, %s Paare", len(entries), len(pairs))
    return ReductionResult(
        filtration=filtration,
        pairs=tuple(pairs),
        reduced=ExactMatrix.from_columns(reduced, len(entries)),
        representatives=representatives,
    )


def persistence_barcode(
    filtration: Filtration,
    p: int,
    *,
    reduction: ReductionResult | None = None,
    with_representatives: bool = True,
) -> Barcode:
    """Bars of dimension ``p``; pairs born and killed at the same time are dropped."""

    result = reduction if reduction is not None else reduce(filtration)
    bars: list[Bar] = []
    reps: list[Chain | None] = []
    for pair in result.pairs:
        if result.simplex(pair.birth).dimension != p:
            continue
        birth = result.time(pair.birth)
        death: TimeValue = INF if pair.death is None else result.time(pair.death)
        if death == birth:
            continue
        bars.append(Bar(p, birth, death))
        reps.append(result.representatives[pair.birth])
    return Barcode.build(p, bars, reps if with_representatives else None)


def betti_table(
    filtration: Filtration, p: int, *, backend: EliminationBackend | str | None = None
) -> dict[Fraction, int]:
    """β_p(K_t) = n_p(t) - rank ∂_p(t) - rank ∂_{p+1}(t) at every critical time."""

    table: dict[Fraction, int] = {}
    for t in filtration.critical_times:
        n_p = filtration.count_at(p, t)
        lower = rank(boundary_matrix(filtration, p, t), backend=backend)
        upper = rank(boundary_matrix(filtration, p + 1, t), backend=backend)
        table[t] = n_p - lower - upper
    return table


def is_boundary_at(
    filtration: Filtration,
    chain: Chain,
    t: TimeValue,
    *,
    backend: EliminationBackend | str | None = None,
) -> bool:
    """Whether ``chain`` lies in the image of ``∂_{p+1}`` at time ``t``."""

    simplices = filtration.simplices_at(chain.dimension, t)
    present = set(simplices)
    if any(simplex not in present for simplex in chain.support):
        return False
    if chain.is_zero():
        return True
    matrix = boundary_matrix(filtration, chain.dimension + 1, t)
    return solve(matrix, chain.to_vector(simplices), backend=backend) is not None
