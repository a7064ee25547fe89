from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmonia.complex import INF
from harmonia.errors import DimensionMismatch, TooLarge
from harmonia.metrics import (
    bar_distance,
    bottleneck,
    bottleneck_bruteforce,
    bottleneck_distance,
)
from harmonia.persistence import Bar, Barcode


def barcode(*pairs: tuple[Fraction | int, Fraction | int | None], dimension: int = 1) -> Barcode:
    return Barcode.build(
        dimension,
        [Bar(dimension, Fraction(b), INF if d is None else Fraction(d)) for b, d in pairs],
    )


quarter = st.integers(min_value=0, max_value=24).map(lambda n: Fraction(n, 4))


@st.composite
def bars(draw: st.DrawFn) -> Bar:
    birth = draw(quarter)
    if draw(st.integers(min_value=0, max_value=5)) == 0:
        return Bar(1, birth, INF)
    length = draw(st.integers(min_value=1, max_value=16).map(lambda n: Fraction(n, 4)))
    return Bar(1, birth, birth + length)


barcodes = st.lists(bars(), max_size=5).map(lambda items: Barcode.build(1, items))


@pytest.mark.parametrize(
    ("left", "right", "expected"),
    [
        (barcode((0, 2)), barcode(), Fraction(1)),
        (barcode((0, 3)), barcode((Fraction(1, 2), Fraction(7, 2))), Fraction(1, 2)),
        (barcode((0, 1), (0, 4)), barcode((0, 4)), Fraction(1, 2)),
        (barcode((0, None)), barcode(), INF),
        (barcode((0, None)), barcode((3, None)), Fraction(3)),
        (barcode(), barcode(), Fraction(0)),
    ],
)
def test_known_distances(left: Barcode, right: Barcode, expected: object) -> None:
    assert bottleneck_distance(left, right) == expected
    assert bottleneck_bruteforce(left, right) == expected


def test_witness_realises_the_distance() -> None:
    left = barcode((0, 1), (0, 4), (2, None))
    right = barcode((0, 4), (1, None))

    result = bottleneck(left, right)

    assert result.distance == 1
    assert result.witness.cost == result.distance
    assert max(pair.cost for pair in result.witness.pairs) == result.distance
    matched = [pair for pair in result.witness.pairs if pair.left and pair.right]
    assert len(matched) == 2


def test_infinite_bars_only_meet_infinite_bars() -> None:
    assert bar_distance(Bar(1, Fraction(0), INF), Bar(1, Fraction(0), Fraction(100))) is INF
    assert bar_distance(Bar(1, Fraction(1), INF), Bar(1, Fraction(4), INF)) == 3


def test_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatch):
        bottleneck_distance(barcode((0, 1), dimension=0), barcode((0, 1)))


def test_bruteforce_refuses_large_inputs() -> None:
    big = barcode(*[(k, k + 1) for k in range(7)])

    with pytest.raises(TooLarge):
        bottleneck_bruteforce(big, barcode())


@settings(max_examples=500, deadline=None)
@given(barcodes, barcodes)
def test_matching_agrees_with_exhaustive_search(left: Barcode, right: Barcode) -> None:
    assert bottleneck_distance(left, right) == bottleneck_bruteforce(left, right)


@settings(max_examples=200, deadline=None)
@given(barcodes, barcodes, barcodes)
def test_pseudometric(a: Barcode, b: Barcode, c: Barcode) -> None:
    ab = bottleneck_distance(a, b)

    assert bottleneck_distance(a, a) == 0
    assert ab == bottleneck_distance(b, a)
    assert ab <= bottleneck_distance(a, c) + bottleneck_distance(c, b)
