"""Exact bottleneck distance between barcodes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from networkx.algorithms.bipartite import hopcroft_karp_matching

from .complex import INF, TimeValue
from .errors import DimensionMismatch, InternalInvariantViolation, TooLarge
from .persistence import Bar, Barcode
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("metrics")

BRUTEFORCE_LIMIT = 6

Node = tuple[str, str, int]


def bar_distance(a: Bar, b: Bar) -> TimeValue:
    """ℓ∞ distance of ``(birth, death)`` points; infinite deaths only meet infinite deaths."""

    birth_gap = abs(a.birth - b.birth)
    if a.is_infinite and b.is_infinite:
        return birth_gap
    if a.is_infinite or b.is_infinite:
        return INF
    return max(birth_gap, abs(a.death - b.death))


def diagonal_distance(bar: Bar) -> TimeValue:
    """Distance to the nearest diagonal point: half the bar length."""

    return bar.length / 2


@dataclass(frozen=True)
class MatchedPair:
    """``left`` or ``right`` is ``None`` when the other bar is sent to the diagonal."""

    left: Bar | None
    right: Bar | None
    cost: TimeValue


@dataclass(frozen=True)
class Matching:
    pairs: tuple[MatchedPair, ...]
    cost: TimeValue


@dataclass(frozen=True)
class BottleneckResult:
    distance: TimeValue
    witness: Matching


def _check_dimensions(left: Barcode, right: Barcode) -> None:
    if left.dimension != right.dimension:
        raise DimensionMismatch(left.dimension, right.dimension)


def _feasibility_graph(left: list[Bar], right: list[Bar], eps: Fraction) -> nx.Graph:
    graph = nx.Graph()
    top = [("bar", "L", i) for i in range(len(left))] + [
        ("diag", "L", j) for j in range(len(right))
    ]
    bottom = [("bar", "R", j) for j in range(len(right))] + [
        ("diag", "R", i) for i in range(len(left))
    ]
    graph.add_nodes_from(top, bipartite=0)
    graph.add_nodes_from(bottom, bipartite=1)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            if bar_distance(a, b) <= eps:
                graph.add_edge(("bar", "L", i), ("bar", "R", j))
        if diagonal_distance(a) <= eps:
            graph.add_edge(("bar", "L", i), ("diag", "R", i))
    for j, b in enumerate(right):
        if diagonal_distance(b) <= eps:
            graph.add_edge(("diag", "L", j), ("bar", "R", j))
        for i in range(len(left)):
            graph.add_edge(("diag", "L", j), ("diag", "R", i))
    return graph


def _perfect_matching(
    left: list[Bar], right: list[Bar], eps: Fraction
) -> dict[Node, Node] | None:
    graph = _feasibility_graph(left, right, eps)
    top_nodes = {node for node, side in graph.nodes(data="bipartite") if side == 0}
    matching: dict[Node, Node] = hopcroft_karp_matching(graph, top_nodes=top_nodes)
    if len(matching) != 2 * (len(left) + len(right)):
        return None
    return matching


def _witness(left: list[Bar], right: list[Bar], matching: dict[Node, Node]) -> Matching:
    pairs: list[MatchedPair] = []
    for i, a in enumerate(left):
        kind, _, j = matching[("bar", "L", i)]
        if kind == "bar":
            pairs.append(MatchedPair(a, right[j], bar_distance(a, right[j])))
        else:
            pairs.append(MatchedPair(a, None, diagonal_distance(a)))
    for j, b in enumerate(right):
        if matching[("bar", "R", j)][0] == "diag":
            pairs.append(MatchedPair(None, b, diagonal_distance(b)))
    cost: TimeValue = max((pair.cost for pair in pairs), default=Fraction(0))
    return Matching(tuple(pairs), cost)


def _candidates(left: list[Bar], right: list[Bar]) -> list[Fraction]:
    values: set[Fraction] = {Fraction(0)}
    for a in left:
        for b in right:
            values.add(abs(a.birth - b.birth))
            if not a.is_infinite and not b.is_infinite:
                values.add(abs(a.death - b.death))  # type: ignore[operator]
    for bar in (*left, *right):
        half = diagonal_distance(bar)
        if isinstance(half, Fraction):
            values.add(half)
    return sorted(values)


def _infinite_matching(left: list[Bar], right: list[Bar]) -> list[MatchedPair]:
    ordered_left = sorted(left, key=Bar.sort_key)
    ordered_right = sorted(right, key=Bar.sort_key)
    pairs = [
        MatchedPair(a, b, bar_distance(a, b)) for a, b in zip(ordered_left, ordered_right)
    ]
    pairs.extend(MatchedPair(a, None, INF) for a in ordered_left[len(ordered_right) :])
    pairs.extend(MatchedPair(None, b, INF) for b in ordered_right[len(ordered_left) :])
    return pairs


def bottleneck(left: Barcode, right: Barcode) -> BottleneckResult:
    """Exact bottleneck distance with an optimal matching as witness.

    The optimum is one of finitely many candidate values; feasibility at a candidate is
    a perfect matching in the threshold graph, and it is monotone in the threshold, so
    the least feasible candidate is found by bisection over the sorted candidates.
    """

    _check_dimensions(left, right)
    if len(left.infinite()) != len(right.infinite()):
        finite = bottleneck(
            Barcode(left.dimension, tuple(left.finite())),
            Barcode(right.dimension, tuple(right.finite())),
        )
        extra = _infinite_matching(left.infinite(), right.infinite())
        return BottleneckResult(INF, Matching(finite.witness.pairs + tuple(extra), INF))

    a_bars, b_bars = list(left.bars), list(right.bars)
    if not a_bars and not b_bars:
        return BottleneckResult(Fraction(0), Matching((), Fraction(0)))

    candidates = _candidates(a_bars, b_bars)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        feasible = _perfect_matching(a_bars, b_bars, candidates[mid]) is not None
        LOGGER.debug("Bottleneck-Kandidat %s: %s", candidates[mid], feasible)
        if feasible:
            hi = mid
        else:
            lo = mid + 1

    matching = _perfect_matching(a_bars, b_bars, candidates[lo])
    if matching is None:
        raise InternalInvariantViolation("no perfect matching at the largest candidate")
    return BottleneckResult(candidates[lo], _witness(a_bars, b_bars, matching))


def bottleneck_distance(left: Barcode, right: Barcode) -> TimeValue:
    return bottleneck(left, right).distance


def bottleneck_bruteforce(left: Barcode, right: Barcode) -> TimeValue:
    """Minimum cost over every partial injection of ``left`` into ``right``.

    Bars left unmatched on either side go to the diagonal.
    """

    _check_dimensions(left, right)
    a_bars, b_bars = list(left.bars), list(right.bars)
    if len(a_bars) > BRUTEFORCE_LIMIT or len(b_bars) > BRUTEFORCE_LIMIT:
        raise TooLarge(
            f"exhaustive bottleneck accepts at most {BRUTEFORCE_LIMIT} bars per side, "
            f"got {len(a_bars)} and {len(b_bars)}"
        )

    def search(k: int, used: frozenset[int], worst: TimeValue) -> TimeValue:
        if k == len(a_bars):
            leftover = [diagonal_distance(b) for j, b in enumerate(b_bars) if j not in used]
            return max([worst, *leftover])
        a = a_bars[k]
        best = search(k + 1, used, max(worst, diagonal_distance(a)))
        for j, b in enumerate(b_bars):
            if j not in used:
                best = min(best, search(k + 1, used | {j}, max(worst, bar_distance(a, b))))
        return best

    return search(0, frozenset(), Fraction(0))
