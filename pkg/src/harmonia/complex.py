"""Simplices, filtrations with exact timestamps, boundary and coboundary matrices."""

from __future__ import annotations

import bisect
import json
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Final, NamedTuple, TypeAlias

from typing_extensions import Self

from .errors import ClosureViolation, DuplicateSimplex, MalformedLine, NonRationalTime
from .exactla import ExactMatrix
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("complex")


class Infinity:
    """The death time of a bar that never dies; greater than every finite time."""

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self) -> tuple[type[Infinity], tuple[()]]:
        return (Infinity, ())

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("harmonia.INF")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Infinity)

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, Infinity)

    def __gt__(self, other: object) -> bool:
        return not isinstance(other, Infinity)

    def __ge__(self, other: object) -> bool:
        return True

    def __add__(self, other: object) -> Infinity:
        return self

    __radd__ = __add__

    def __sub__(self, other: object) -> Infinity:
        if isinstance(other, Infinity):
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __truediv__(self, other: object) -> Infinity:
        return self


INF: Final = Infinity()
TimeValue: TypeAlias = "Fraction | Infinity"


def parse_time(token: str | int | Fraction, *, line: int | None = None) -> Fraction:
    """Parse a decimal (``1.5``) or rational (``3/2``) literal exactly."""

    if isinstance(token, Fraction):
        return token
    if isinstance(token, bool) or not isinstance(token, (str, int)):
        raise NonRationalTime(f"time is not a rational literal: {token!r}", line=line)
    try:
        return Fraction(token.strip() if isinstance(token, str) else token)
    except (ValueError, ZeroDivisionError):
        raise NonRationalTime(f"time is not a rational literal: {token!r}", line=line) from None


def _terminates(value: Fraction) -> bool:
    denominator = value.denominator
    for prime in (2, 5):
        while denominator % prime == 0:
            denominator //= prime
    return denominator == 1


def format_time(value: TimeValue, *, decimal: bool = False) -> str:
    """``a/b`` (or ``a``) for finite times, ``inf`` for infinity.

    With ``decimal`` a terminating expansion is printed exactly; others stay ``a/b``.
    """

    if isinstance(value, Infinity):
        return "inf"
    if value.denominator == 1:
        return str(value.numerator)
    if decimal and _terminates(value):
        with localcontext() as context:
            context.prec = len(str(value.denominator)) + len(str(value.numerator)) + 4
            exact = Decimal(value.numerator) / Decimal(value.denominator)
        return format(exact.normalize(), "f")
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Simplex:
    """An oriented simplex; the sorted vertex order is its orientation."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("a simplex needs at least one vertex")
        if any(v < 0 for v in self.vertices):
            raise ValueError(f"negative vertex id in {self.vertices}")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError(f"vertices must be strictly increasing: {self.vertices}")

    @classmethod
    def of(cls, *vertices: int) -> Self:
        return cls(tuple(sorted(vertices)))

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def boundary_terms(self) -> list[tuple[int, Simplex]]:
        """``(sign, face)`` pairs of the alternating boundary formula; empty for vertices."""

        if self.dimension == 0:
            return []
        return [
            (-1 if q % 2 else 1, Simplex(self.vertices[:q] + self.vertices[q + 1 :]))
            for q in range(len(self.vertices))
        ]

    def faces(self) -> list[Simplex]:
        return [face for _, face in self.boundary_terms()]

    def all_faces(self) -> Iterator[Simplex]:
        """Every proper face, of every dimension."""

        for size in range(1, len(self.vertices)):
            for vertices in combinations(self.vertices, size):
                yield Simplex(vertices)

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.vertices) + "]"


class SimplexIndex(NamedTuple):
    dimension: int
    column: int
    time: Fraction


def _column_key(entry: tuple[Simplex, Fraction]) -> tuple[Fraction, int, tuple[int, ...]]:
    simplex, time = entry
    return (time, simplex.dimension, simplex.vertices)


def _validate(
    entries: Sequence[tuple[Simplex, Fraction]], lines: Sequence[int] | None = None
) -> None:
    seen: dict[Simplex, tuple[Fraction, int | None]] = {}
    for k, (simplex, time) in enumerate(entries):
        line = lines[k] if lines is not None else None
        if simplex in seen:
            first = seen[simplex][1]
            detail = f" (first on line {first})" if first is not None else ""
            raise DuplicateSimplex(
                f"duplicate simplex {simplex}{detail}", line=line, simplex=simplex.vertices
            )
        seen[simplex] = (time, line)

    for k, (simplex, time) in enumerate(entries):
        line = lines[k] if lines is not None else None
        for face in simplex.faces():
            if face not in seen:
                raise ClosureViolation(
                    f"simplex {simplex} is missing its face {face}",
                    line=line,
                    simplex=simplex.vertices,
                )
            face_time = seen[face][0]
            if face_time > time:
                raise ClosureViolation(
                    f"face {face} arrives at {format_time(face_time)} after simplex {simplex} "
                    f"at {format_time(time)}",
                    line=line,
                    simplex=simplex.vertices,
                )


@dataclass(frozen=True)
class Filtration:
    """An immutable filtered simplicial complex.

    ``entries`` are kept in global column order: by time, then dimension, then vertices.
    """

    entries: tuple[tuple[Simplex, Fraction], ...]
    _lines: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        _validate(self.entries, self._lines)
        ordered = tuple(sorted(self.entries, key=_column_key))
        object.__setattr__(self, "entries", ordered)
        object.__setattr__(self, "_lines", None)

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Simplex | Sequence[int], Fraction | int | str]]
    ) -> Self:
        entries = []
        for simplex, time in pairs:
            if not isinstance(simplex, Simplex):
                simplex = Simplex.of(*simplex)
            entries.append((simplex, parse_time(time)))
        return cls(tuple(entries))

    @classmethod
    def from_function(cls, values: Mapping[Simplex, Fraction]) -> Self:
        return cls(tuple(values.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Simplex, Fraction]]:
        return iter(self.entries)

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.index

    @cached_property
    def index(self) -> dict[Simplex, SimplexIndex]:
        columns: dict[int, int] = {}
        out: dict[Simplex, SimplexIndex] = {}
        for simplex, time in self.entries:
            dim = simplex.dimension
            out[simplex] = SimplexIndex(dim, columns.get(dim, 0), time)
            columns[dim] = columns.get(dim, 0) + 1
        return out

    @cached_property
    def _by_dimension(self) -> dict[int, tuple[tuple[Simplex, ...], tuple[Fraction, ...]]]:
        grouped: dict[int, tuple[list[Simplex], list[Fraction]]] = {}
        for simplex, time in self.entries:
            simplices, times = grouped.setdefault(simplex.dimension, ([], []))
            simplices.append(simplex)
            times.append(time)
        return {dim: (tuple(s), tuple(t)) for dim, (s, t) in grouped.items()}

    @cached_property
    def critical_times(self) -> tuple[Fraction, ...]:
        return tuple(sorted({time for _, time in self.entries}))

    @property
    def max_dimension(self) -> int:
        return max(self._by_dimension, default=-1)

    def simplices(self, p: int) -> tuple[Simplex, ...]:
        """All ``p``-simplices of the final complex in column order."""

        return self._by_dimension.get(p, ((), ()))[0]

    def time_of(self, simplex: Simplex) -> Fraction:
        return self.index[simplex].time

    def count_at(self, p: int, t: TimeValue | None = None) -> int:
        if p < 0:
            return 0
        simplices, times = self._by_dimension.get(p, ((), ()))
        if t is None or isinstance(t, Infinity):
            return len(simplices)
        return bisect.bisect_right(times, t)

    def simplices_at(self, p: int, t: TimeValue | None = None) -> tuple[Simplex, ...]:
        return self.simplices(p)[: self.count_at(p, t)]

    def as_function(self) -> dict[Simplex, Fraction]:
        return dict(self.entries)

    def refine(self) -> tuple[Filtration, dict[Fraction, Fraction]]:
        """One simplex per step: the k-th column gets time ``k``.

        Returns the refined filtration and the map from step to original time.
        """

        refined = Filtration(
            tuple((simplex, Fraction(k)) for k, (simplex, _) in enumerate(self.entries))
        )
        steps = {Fraction(k): time for k, (_, time) in enumerate(self.entries)}
        return refined, steps


def simplices_at(filtration: Filtration, p: int, t: TimeValue | None = None) -> list[Simplex]:
    """``p``-simplices present at ``t`` in column order (time, then vertices)."""

    return list(filtration.simplices_at(p, t))


def boundary_matrix(filtration: Filtration, p: int, t: TimeValue | None = None) -> ExactMatrix:
    """Signed incidence matrix from ``p``-chains to ``(p-1)``-chains of ``K_t``."""

    if p < 0:
        raise ValueError("dimension must be non-negative")
    columns_simplices = filtration.simplices_at(p, t)
    rows_simplices = filtration.simplices_at(p - 1, t) if p > 0 else ()
    index = filtration.index
    columns = [
        {index[face].column: sign for sign, face in simplex.boundary_terms()}
        for simplex in columns_simplices
    ]
    return ExactMatrix.from_columns(
        columns,
        len(rows_simplices),
        row_labels=rows_simplices,
        col_labels=columns_simplices,
    )


def coboundary_matrix(filtration: Filtration, p: int, t: TimeValue | None = None) -> ExactMatrix:
    """``δ^p`` at ``t``, the transpose of ``∂_{p+1}``."""

    return boundary_matrix(filtration, p + 1, t).transpose()


def _tokens_to_entry(tokens: Sequence[str], line: int) -> tuple[Simplex, Fraction]:
    if len(tokens) < 2:
        raise MalformedLine(
            f"expected '<time> <v0> ... <vk>', got {' '.join(tokens)!r}", line=line
        )
    time = parse_time(tokens[0], line=line)
    vertices = []
    for token in tokens[1:]:
        if not (token.isascii() and token.isdigit()):
            raise MalformedLine(f"vertex id is not a non-negative integer: {token!r}", line=line)
        vertices.append(int(token))
    if len(set(vertices)) != len(vertices):
        raise MalformedLine(f"repeated vertex in {tokens[1:]}", line=line)
    return Simplex(tuple(sorted(vertices))), time


def _parse_text(text: str) -> tuple[list[tuple[Simplex, Fraction]], list[int]]:
    entries: list[tuple[Simplex, Fraction]] = []
    lines: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        entries.append(_tokens_to_entry(stripped.split(), number))
        lines.append(number)
    return entries, lines


def _parse_json(text: str) -> tuple[list[tuple[Simplex, Fraction]], list[int]]:
    try:
        data: Any = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, Mapping) or not isinstance(data.get("simplices"), list):
        raise MalformedLine("JSON filtration needs a 'simplices' list")

    entries: list[tuple[Simplex, Fraction]] = []
    lines: list[int] = []
    for number, item in enumerate(data["simplices"], start=1):
        if not isinstance(item, Mapping) or "t" not in item or "v" not in item:
            raise MalformedLine("entry needs 't' and 'v'", line=number)
        vertices = item["v"]
        if not isinstance(vertices, list) or not vertices:
            raise MalformedLine("'v' must be a non-empty list", line=number)
        if any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in vertices):
            raise MalformedLine(
                f"vertex ids must be non-negative integers: {vertices}", line=number
            )
        if len(set(vertices)) != len(vertices):
            raise MalformedLine(f"repeated vertex in {vertices}", line=number)
        entries.append((Simplex(tuple(sorted(vertices))), parse_time(item["t"], line=number)))
        lines.append(number)
    return entries, lines


def parse_filtration(data: bytes | str) -> Filtration:
    """Parse the text format (``<time> <v0> ... <vk>`` per line) or its JSON equivalent."""

    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedLine(f"input is not UTF-8: {exc.reason}") from None
    else:
        text = data

    if text.lstrip().startswith("{"):
        entries, lines = _parse_json(text)
    else:
        entries, lines = _parse_text(text)

    filtration = Filtration(tuple(entries), tuple(lines))
    LOGGER.debug(
        "Filtration gelesen: %s Simplizes, %s kritische Zeiten",
        len(filtration),
        len(filtration.critical_times),
    )
    return filtration


def format_filtration(filtration: Filtration) -> str:
    """Canonical text form, one simplex per line in column order."""

    return "".join(
        format_time(time) + " " + " ".join(str(v) for v in simplex.vertices) + "\n"
        for simplex, time in filtration.entries
    )
