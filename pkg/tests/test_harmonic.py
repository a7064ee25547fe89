from __future__ import annotations

import random
from fractions import Fraction

import pytest

from harmonia import constructions
from harmonia.complex import (
    INF,
    Filtration,
    Simplex,
    TimeValue,
    format_filtration,
    parse_filtration,
)
from harmonia.errors import NotACycle, ZeroChain
from harmonia.harmonic import (
    canonical_barcode,
    harmonic_basis,
    harmonic_projection,
    harmonic_span,
    is_span_final,
    rank_table,
    subordinate_as_barcode,
    subordinate_barcode,
)
from harmonia.harness import random_filtration
from harmonia.persistence import Bar, Barcode, Chain, is_boundary_at


def chain(*terms: tuple[tuple[int, ...], int | Fraction]) -> Chain:
    dimension = len(terms[0][0]) - 1
    return Chain.from_mapping(dimension, {Simplex.of(*v): c for v, c in terms})


def intervals(barcode: Barcode) -> list[tuple[Fraction, TimeValue]]:
    return sorted((bar.birth, bar.death) for bar in barcode)


def as_times(pairs: list[tuple[int, int | None]]) -> list[tuple[Fraction, TimeValue]]:
    return sorted((Fraction(b), INF if d is None else Fraction(d)) for b, d in pairs)


TRIANGLE_CYCLE = chain(((0, 1), 1), ((0, 2), -1), ((1, 2), 1))


def test_triangle_cycle_dies_with_coefficient_three(filled_triangle: Filtration) -> None:
    span = harmonic_span(filled_triangle, TRIANGLE_CYCLE)

    assert (span.start, span.end) == (Fraction(1), Fraction(2))
    assert TRIANGLE_CYCLE.coboundary(filled_triangle) == {Simplex.of(0, 1, 2): Fraction(3)}
    assert intervals(canonical_barcode(filled_triangle, 1)) == as_times([(1, 2)])


def test_harmonic_basis_dimensions(filled_triangle: Filtration) -> None:
    assert harmonic_basis(filled_triangle, 1, Fraction(1)).h == 1
    assert harmonic_basis(filled_triangle, 1, Fraction(2)).h == 0
    assert harmonic_basis(filled_triangle, 0, Fraction(0)).h == 3
    # Har_0 of a connected complex is spanned by the constant chain.
    (constant,) = harmonic_basis(filled_triangle, 0, Fraction(1)).chains()
    assert len({coefficient for _, coefficient in constant.terms}) == 1
    with pytest.raises(ValueError):
        harmonic_basis(filled_triangle, 1, Fraction(3, 2))


def test_span_rejects_bad_chains(filled_triangle: Filtration) -> None:
    with pytest.raises(ZeroChain):
        harmonic_span(filled_triangle, Chain(1))
    with pytest.raises(NotACycle):
        harmonic_span(filled_triangle, chain(((0, 1), 1)))
    with pytest.raises(ValueError):
        harmonic_span(filled_triangle, chain(((0, 5), 1), ((0, 1), 1)))


def test_hollow_triangle_cycle_lives_forever(hollow_triangle: Filtration) -> None:
    span = harmonic_span(hollow_triangle, TRIANGLE_CYCLE)

    assert span.end is INF
    assert intervals(canonical_barcode(hollow_triangle, 1)) == as_times([(1, None)])


def test_repair_square_subordinate_pieces(repair_square: Filtration) -> None:
    pieces = subordinate_barcode(repair_square, 1)
    a = chain(((0, 1), 1), ((0, 2), -1), ((1, 2), 1))
    repaired = a + chain(((0, 2), 1), ((0, 3), -1), ((2, 3), 1)).scale(Fraction(1, 3))

    assert intervals(subordinate_as_barcode(pieces, 1)) == as_times([(1, 2), (1, 2), (2, 3)])
    late = [piece for piece in pieces if piece.birth == 2]
    assert len(late) == 1
    assert late[0].representative == repaired
    assert late[0].representative.coefficient(Simplex.of(0, 2)) == Fraction(-2, 3)
    assert not late[0].representative.coboundary(repair_square, Fraction(2))


def test_repair_square_canonical(repair_square: Filtration) -> None:
    barcode = canonical_barcode(repair_square, 1, representatives=True)

    assert intervals(barcode) == as_times([(1, 2), (1, 3)])


def test_square_with_diagonal() -> None:
    filtration = constructions.square_with_diagonal()

    assert intervals(canonical_barcode(filtration, 1)) == as_times([(1, 3)])


def test_book_pairs_by_nesting(example_one_book: Filtration) -> None:
    barcode = canonical_barcode(example_one_book, 1, representatives=True)

    assert intervals(barcode) == as_times([(9, 16), (11, 18), (13, 17), (15, 19)])
    assert barcode.representatives is not None
    for bar, representative in zip(barcode.bars, barcode.representatives):
        assert representative is not None
        span = harmonic_span(example_one_book, representative)
        assert (span.start, span.end) == (bar.birth, bar.death)


@pytest.mark.parametrize(
    ("swapped", "expected"),
    [
        (False, [(4, 17), (5, 27), (7, 37)]),
        (True, [(4, 27), (5, 17), (7, 37)]),
    ],
)
def test_swap_pair_canonical(swapped: bool, expected: list[tuple[int, int]]) -> None:
    filtration = constructions.swap_pair(10, swapped=swapped)

    assert intervals(canonical_barcode(filtration, 1)) == as_times(expected)


@pytest.mark.parametrize(
    ("swapped", "expected"),
    [
        (False, [(4, 17), (17, 27), (5, 17), (17, 27), (27, 37), (7, 17)]),
        (True, [(4, 27), (27, 37), (5, 17), (17, 27), (7, 17)]),
    ],
)
def test_swap_pair_subordinate(swapped: bool, expected: list[tuple[int, int]]) -> None:
    filtration = constructions.swap_pair(10, swapped=swapped)

    pieces = subordinate_barcode(filtration, 1)

    assert intervals(subordinate_as_barcode(pieces, 1)) == as_times(expected)
    for piece in pieces:
        assert piece.representative.is_cycle()
        assert not piece.representative.coboundary(filtration, piece.birth)


@pytest.mark.parametrize("k", [3, 4, 7, 12, 20])
def test_wheel_bars_all_start_together(k: int) -> None:
    barcode = canonical_barcode(constructions.triangulated_disc(k), 1)

    assert intervals(barcode) == as_times([(1, j) for j in range(2, k + 2)])


def test_open_wheel_keeps_one_cycle() -> None:
    barcode = canonical_barcode(constructions.triangulated_disc(6, closed=False), 1)

    assert intervals(barcode) == as_times([(1, j) for j in range(2, 7)] + [(1, None)])


@pytest.mark.parametrize(
    "filtration",
    [
        constructions.example_one_book(),
        constructions.repair_square(),
        constructions.triangulated_disc(5),
        constructions.swap_pair(3, swapped=True),
    ],
)
def test_rank_table_methods_agree(filtration: Filtration) -> None:
    by_coboundary = rank_table(filtration, 1)
    by_intersection = rank_table(filtration, 1, method="intersection", backend="dense")

    assert by_coboundary == by_intersection
    by_coboundary.check()


def test_rank_table_rejects_unknown_method(filled_triangle: Filtration) -> None:
    with pytest.raises(ValueError):
        rank_table(filled_triangle, 1, method="magic")  # type: ignore[arg-type]


def test_backends_give_the_same_canonical_barcode(example_one_book: Filtration) -> None:
    sparse = canonical_barcode(example_one_book, 1, representatives=True, backend="sparse")
    dense = canonical_barcode(example_one_book, 1, representatives=True, backend="dense")

    assert sparse == dense


def test_projection_is_orthogonal_to_boundaries(repair_square: Filtration) -> None:
    z = chain(((0, 1), 1), ((0, 2), -1), ((1, 2), 1))
    t = Fraction(2)

    projected = harmonic_projection(repair_square, z, t)

    assert not projected.coboundary(repair_square, t)
    assert projected.norm_squared() < z.norm_squared()
    boundary = chain(((0, 2), 1), ((0, 3), -1), ((2, 3), 1))
    assert projected.dot(boundary) == 0


def test_projection_of_a_boundary_is_zero(filled_triangle: Filtration) -> None:
    assert harmonic_projection(filled_triangle, TRIANGLE_CYCLE, Fraction(2)).is_zero()


def test_spans_never_revive(example_one_book: Filtration) -> None:
    barcode = canonical_barcode(example_one_book, 1, representatives=True)

    assert barcode.representatives is not None
    for representative in barcode.representatives:
        assert representative is not None
        assert is_span_final(example_one_book, representative)


@pytest.mark.parametrize("seed", range(100))
def test_canonical_barcode_ignores_line_order_and_backend(seed: int) -> None:
    filtration = random_filtration(seed, max_vertices=7)
    lines = format_filtration(filtration).splitlines()
    random.Random(seed).shuffle(lines)
    shuffled = parse_filtration("\n".join(lines) + "\n")

    reference = canonical_barcode(filtration, 1, representatives=True, backend="sparse")

    assert canonical_barcode(shuffled, 1, representatives=True, backend="sparse") == reference
    assert canonical_barcode(filtration, 1, representatives=True, backend="dense") == reference


@pytest.mark.parametrize("seed", range(50))
def test_harmonic_cycles_have_least_norm(seed: int) -> None:
    rng = random.Random(seed)
    filtration = random_filtration(seed, max_vertices=6, p_include=0.6)
    t = rng.choice(filtration.critical_times)
    triangles = filtration.simplices_at(2, t)

    for z in harmonic_basis(filtration, 1, t).chains():
        for _ in range(20):
            if not triangles:
                break
            filler = Chain.from_mapping(
                2, {rng.choice(triangles): Fraction(rng.randint(-3, 3), rng.randint(1, 3))}
            )
            b = Chain.from_mapping(1, filler.boundary())
            assert z.dot(b) == 0
            assert (z + b).norm_squared() >= z.norm_squared()


def test_book_repairs_the_oldest_bar_at_each_page(example_one_book: Filtration) -> None:
    pieces = [
        piece for piece in subordinate_barcode(example_one_book, 1) if piece.parent.birth == 9
    ]
    pages = [chain(((1, 5), 1), ((0, 5), -1), ((0, 1), 1))]
    pages.append(chain(((1, 4), 1), ((0, 4), -1), ((0, 1), 1)))
    pages.append(chain(((1, 3), 1), ((0, 3), -1), ((0, 1), 1)))

    assert [(piece.birth, piece.death) for piece in pieces] == [
        (Fraction(9), Fraction(16)),
        (Fraction(16), Fraction(17)),
        (Fraction(17), Fraction(18)),
        (Fraction(18), Fraction(19)),
    ]
    z = pieces[0].representative
    s = z.coefficient(Simplex.of(0, 1))
    assert z == chain(((1, 2), 1), ((0, 2), -1), ((0, 1), 1)).scale(s)
    for k, piece in enumerate(pieces[1:], start=1):
        filled = pages[0]
        for page in pages[1:k]:
            filled += page
        assert piece.representative == z + filled.scale(-s / (k + 2))
        assert not piece.representative.coboundary(example_one_book, piece.birth)


@pytest.mark.parametrize("p", [0, 1])
@pytest.mark.parametrize("seed", range(60))
def test_subordinate_pieces_tile_persistence_bars(seed: int, p: int) -> None:
    filtration = random_filtration(seed, max_vertices=7, single_step=seed % 3 == 0)

    pieces = subordinate_barcode(filtration, p)

    by_parent: dict[int, tuple[Bar, list[tuple[Fraction, TimeValue]]]] = {}
    for piece in pieces:
        _, spans = by_parent.setdefault(id(piece.parent), (piece.parent, []))
        spans.append((piece.birth, piece.death))
        span = harmonic_span(filtration, piece.representative)
        assert span.start <= piece.birth
        assert span.end == piece.death
    for parent, spans in by_parent.values():
        assert spans[0][0] == parent.birth
        assert spans[-1][1] == parent.death
        assert all(left[1] == right[0] for left, right in zip(spans, spans[1:]))


@pytest.mark.parametrize("p", [0, 1])
@pytest.mark.parametrize("seed", range(60))
def test_subordinate_and_canonical_mass_agree(seed: int, p: int) -> None:
    filtration = random_filtration(500 + seed, max_vertices=7)

    subordinate = subordinate_as_barcode(subordinate_barcode(filtration, p), p)
    canonical = canonical_barcode(filtration, p)

    for t in filtration.critical_times:
        h = harmonic_basis(filtration, p, t).h
        assert subordinate.alive_at(t) == canonical.alive_at(t) == h


@pytest.mark.parametrize("p", [0, 1])
@pytest.mark.parametrize("seed", range(40))
def test_harmonic_cycles_bound_only_with_a_coboundary(seed: int, p: int) -> None:
    filtration = random_filtration(900 + seed, max_vertices=7)
    times = filtration.critical_times

    for i, t in enumerate(times):
        for z in harmonic_basis(filtration, p, t).chains():
            for later in times[i:]:
                if is_boundary_at(filtration, z, later):
                    assert z.coboundary(filtration, later)
