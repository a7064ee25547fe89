"""Small named filtrations with hand-checked barcodes.

Vertex ids are plain integers; docstrings name the vertices where a letter reads better.
"""

from __future__ import annotations

from fractions import Fraction

from .complex import Filtration

Pairs = list[tuple[tuple[int, ...], Fraction | int]]


def _vertices(n: int, time: Fraction | int = 0) -> Pairs:
    return [((v,), time) for v in range(n)]


def hollow_triangle() -> Filtration:
    """Three vertices at 0, three edges at 1."""

    return Filtration.from_pairs(_vertices(3) + [((0, 1), 1), ((0, 2), 1), ((1, 2), 1)])


def filled_triangle() -> Filtration:
    """The hollow triangle with its 2-simplex at time 2."""

    return Filtration.from_pairs(list(hollow_triangle().entries) + [((0, 1, 2), 2)])


def repair_square() -> Filtration:
    """Two one-cycles sharing the edge ``02``; the triangle ``023`` fills one and meets the other.

    Persistence in dimension 1 gives ``A = 01 - 02 + 12`` on ``[1, 3)`` and
    ``B = 02 - 03 + 23`` on ``[1, 2)``. At time 2 the coboundary of ``A`` is ``-[0,2,3]``,
    so the harmonic repair is ``A + ∂[0,2,3] / 3``.
    """

    return Filtration.from_pairs(
        _vertices(4)
        + [((0, 1), 1), ((0, 2), 1), ((0, 3), 1), ((1, 2), 1), ((2, 3), 1)]
        + [((0, 2, 3), 2), ((0, 1, 2), 3)]
    )


def square_with_diagonal() -> Filtration:
    """A square at time 1; its diagonal and one half at 2, the other half at 3."""

    return Filtration.from_pairs(
        _vertices(4)
        + [((0, 1), 1), ((1, 2), 1), ((2, 3), 1), ((0, 3), 1)]
        + [((0, 2), 2), ((0, 1, 2), 2), ((0, 2, 3), 3)]
    )


def triangulated_disc(k: int, *, closed: bool = True) -> Filtration:
    """Wheel with hub 0 and rim ``1..k``: all edges at 1, the ``i``-th triangle at ``i + 1``.

    The last triangle ``(0, 1, k)`` closes the wheel; with ``closed=False`` it is left out
    and one cycle survives forever.
    """

    if k < 3:
        raise ValueError("a wheel needs at least three rim vertices")
    rim = list(range(1, k + 1))
    edges: Pairs = [((0, v), 1) for v in rim]
    edges += [((v, v + 1), 1) for v in rim[:-1]] + [((1, k), 1)]
    triangles: Pairs = [((0, v, v + 1), v + 1) for v in rim[:-1]]
    if closed:
        triangles.append(((0, 1, k), k + 1))
    return Filtration.from_pairs(_vertices(k + 1) + edges + triangles)


def example_one_book() -> Filtration:
    """Four triangles glued along the spine ``uv``, each page closing an older cycle.

    Vertices ``u, v, a, b, c, d`` are ``0..5`` at times ``1..6``. Persistence pairs the
    pages by the elder rule, ``{[15,16), [13,17), [11,18), [9,19)}``; the harmonic
    barcode instead pairs them by nesting, ``{[9,16), [11,18), [13,17), [15,19)}``.
    """

    u, v, a, b, c, d = range(6)
    pairs: Pairs = [((x,), x + 1) for x in range(6)]
    pairs += [
        ((u, a), 7),
        ((v, a), 8),
        ((u, v), 9),
        ((u, b), 10),
        ((v, b), 11),
        ((u, c), 12),
        ((v, c), 13),
        ((u, d), 14),
        ((v, d), 15),
    ]
    pairs += [((u, v, d), 16), ((u, v, c), 17), ((u, v, b), 18), ((u, v, a), 19)]
    return Filtration.from_pairs(pairs)


def swap_pair(scale: Fraction | int = 10, *, swapped: bool = False) -> Filtration:
    """Three pages over the spine ``uv``, with ``uv`` and ``vb`` arriving at 4 and 5.

    Vertices ``u, v, a, b, c`` are ``0..4`` at time 0. ``swapped`` exchanges the arrival
    times of ``uv`` and ``vb``. The pages ``uvc``, ``uva``, ``uvb`` arrive at
    ``7 + scale``, ``7 + 2 scale`` and ``7 + 3 scale``.
    """

    scale = Fraction(scale)
    if scale <= 0:
        raise ValueError("scale must be positive")
    u, v, a, b, c = range(5)
    first, second = ((v, b), (u, v)) if swapped else ((u, v), (v, b))
    pairs: Pairs = _vertices(5)
    pairs += [((u, a), 1), ((v, a), 2), ((u, b), 3), (first, 4), (second, 5)]
    pairs += [((u, c), 6), ((v, c), 7)]
    pairs += [((u, v, c), 7 + scale), ((u, v, a), 7 + 2 * scale), ((u, v, b), 7 + 3 * scale)]
    return Filtration.from_pairs(pairs)


def triangulated_grid(side: int = 8) -> Filtration:
    """A ``side x side`` vertex grid swept square by square.

    All vertices exist at 0. The ``s``-th square (row-major) brings its missing edges and
    its diagonal at time ``s`` and both of its triangles at ``s + 1``.
    """

    if side < 2:
        raise ValueError("the grid needs at least two vertices per side")

    def vertex(row: int, col: int) -> int:
        return row * side + col

    values: dict[tuple[int, ...], int] = {(x,): 0 for x in range(side * side)}
    step = 0
    for row in range(side - 1):
        for col in range(side - 1):
            nw, ne = vertex(row, col), vertex(row, col + 1)
            sw, se = vertex(row + 1, col), vertex(row + 1, col + 1)
            for edge in ((nw, ne), (nw, sw), (ne, se), (sw, se), (nw, se)):
                values.setdefault(tuple(sorted(edge)), step)
            values[tuple(sorted((nw, ne, se)))] = step + 1
            values[tuple(sorted((nw, sw, se)))] = step + 1
            step += 1
    return Filtration.from_pairs(values.items())


__all__ = [
    "example_one_book",
    "filled_triangle",
    "hollow_triangle",
    "repair_square",
    "square_with_diagonal",
    "swap_pair",
    "triangulated_disc",
    "triangulated_grid",
]
