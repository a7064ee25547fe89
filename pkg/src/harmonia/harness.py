"""Random instances, stability trials and independent oracles."""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .complex import INF, Filtration, Infinity, Simplex, TimeValue
from .config import GeneratorKind, StabilityConfig
from .constructions import swap_pair
from .errors import InternalInvariantViolation
from .exactla import ExactMatrix, IncrementalRank, intersection_dim_via_kernel, kernel_basis
from .harmonic import (
    BackendArg,
    RankTable,
    canonical_barcode,
    harmonic_bases,
    harmonic_span,
    is_span_final,
    rank_table,
    subordinate_as_barcode,
    subordinate_barcode,
)
from .metrics import bottleneck_distance
from .parallel import parallel_map
from .persistence import Bar, Barcode, Chain, betti_table, persistence_barcode
from .reports import InstabilityRow, TrialReport
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("harness")

# Perturbations move each value by a multiple of eps/8 in [-eps, eps].
_PERTURB_STEPS = 8


@dataclass(frozen=True)
class MonotoneFunction:
    """Values on a fixed complex with ``f(face) <= f(coface)``."""

    values: Mapping[Simplex, Fraction]
    kind: GeneratorKind = "monotone"

    def __post_init__(self) -> None:
        for simplex, value in self.values.items():
            for face in simplex.faces():
                if face not in self.values:
                    raise ValueError(f"{simplex} is missing its face {face}")
                if self.values[face] > value:
                    raise ValueError(f"f({face}) > f({simplex})")

    @classmethod
    def from_filtration(cls, filtration: Filtration) -> MonotoneFunction:
        return cls(filtration.as_function())

    def filtration(self) -> Filtration:
        return Filtration.from_function(self.values)

    def sup_distance(self, other: MonotoneFunction) -> Fraction:
        if set(self.values) != set(other.values):
            raise ValueError("functions live on different complexes")
        return max(
            (abs(value - other.values[simplex]) for simplex, value in self.values.items()),
            default=Fraction(0),
        )


def _in_dimension_order(simplices: Iterable[Simplex]) -> list[Simplex]:
    return sorted(simplices, key=lambda s: (s.dimension, s.vertices))


def random_complex(
    rng: random.Random, max_vertices: int = 8, max_dim: int = 2, p_include: float = 0.5
) -> list[Simplex]:
    """Every vertex below ``max_vertices``; each higher simplex whose faces are present is
    kept with probability ``p_include``.
    """

    present = {Simplex.of(v) for v in range(max_vertices)}
    for dim in range(1, max_dim + 1):
        for vertices in combinations(range(max_vertices), dim + 1):
            simplex = Simplex(vertices)
            if all(face in present for face in simplex.faces()) and rng.random() < p_include:
                present.add(simplex)
    return _in_dimension_order(present)


def random_monotone_function(
    simplices: Sequence[Simplex], rng: random.Random, kind: GeneratorKind = "monotone"
) -> MonotoneFunction:
    """Small integer values; ``lower_star`` takes the maximum over the vertices."""

    ordered = _in_dimension_order(simplices)
    values: dict[Simplex, Fraction] = {}
    if kind == "lower_star":
        vertex_values = {
            v: Fraction(rng.randint(0, 2 * len(ordered)))
            for v in sorted({v for s in ordered for v in s.vertices})
        }
        for simplex in ordered:
            values[simplex] = max(vertex_values[v] for v in simplex.vertices)
    else:
        for simplex in ordered:
            floor = max((values[face] for face in simplex.faces()), default=Fraction(0))
            values[simplex] = floor + rng.randint(0, 3)
    return MonotoneFunction(values, kind)


def random_filtration(
    seed: int,
    max_vertices: int = 8,
    max_dim: int = 2,
    p_include: float = 0.5,
    *,
    kind: GeneratorKind = "monotone",
    single_step: bool = False,
) -> Filtration:
    """Deterministic per ``seed``; ``single_step`` spreads the simplices one per time step."""

    rng = random.Random(seed)
    simplices = random_complex(rng, max_vertices, max_dim, p_include)
    filtration = random_monotone_function(simplices, rng, kind).filtration()
    if single_step:
        filtration, _ = filtration.refine()
    return filtration


def min_gap(values: Iterable[Fraction]) -> Fraction | None:
    """Smallest distance between two distinct values, ``None`` with fewer than two."""

    distinct = sorted(set(values))
    if len(distinct) < 2:
        return None
    return min(b - a for a, b in zip(distinct, distinct[1:]))


def perturb(f: MonotoneFunction, eps: Fraction, seed: int) -> MonotoneFunction:
    """Move every value by at most ``eps`` and restore monotonicity by a pass over faces.

    The pass only raises a value to the maximum of its (already perturbed) faces, which
    stays within ``eps`` of the original because ``f`` is monotone.
    """

    if eps < 0:
        raise ValueError("eps must be non-negative")
    rng = random.Random(seed)

    def shift() -> Fraction:
        return Fraction(rng.randint(-_PERTURB_STEPS, _PERTURB_STEPS), _PERTURB_STEPS) * eps

    ordered = _in_dimension_order(f.values)
    values: dict[Simplex, Fraction] = {}
    if f.kind == "lower_star":
        vertices = {s.vertices[0]: f.values[s] + shift() for s in ordered if s.dimension == 0}
        for simplex in ordered:
            values[simplex] = max(vertices[v] for v in simplex.vertices)
    else:
        for simplex in ordered:
            moved = f.values[simplex] + shift()
            values[simplex] = max([moved, *(values[face] for face in simplex.faces())])
    return MonotoneFunction(values, f.kind)


def _clamp_eps(f: MonotoneFunction, eps: Fraction) -> Fraction:
    gap = min_gap(f.values.values())
    if gap is None:
        if eps:
            LOGGER.warning("Nur ein Funktionswert, eps=%s wird auf 0 gesetzt", eps)
        return Fraction(0)
    if eps >= gap / 4:
        clamped = gap / 5
        LOGGER.warning("eps=%s liegt nicht unter min-gap/4=%s, verwende %s", eps, gap / 4, clamped)
        return clamped
    return eps


def stability_trial(
    simplices: Sequence[Simplex],
    seed: int,
    eps: Fraction,
    p: int,
    *,
    kind: GeneratorKind = "monotone",
    backend: BackendArg = None,
) -> TrialReport:
    """Barcode distances for a random ``f`` and ``perturb(f, eps)`` next to ``sup |f - g|``."""

    rng = random.Random(seed)
    f = random_monotone_function(simplices, rng, kind)
    target = _clamp_eps(f, Fraction(eps))
    g = perturb(f, target, rng.randrange(2**32))
    left, right = f.filtration(), g.filtration()

    report = TrialReport.from_values(
        seed=seed,
        kind=kind,
        dimension=p,
        requested_eps=Fraction(eps),
        eps=target,
        sup_distance=f.sup_distance(g),
        canonical_distance=bottleneck_distance(
            canonical_barcode(left, p, backend=backend, n_jobs=1),
            canonical_barcode(right, p, backend=backend, n_jobs=1),
        ),
        persistence_distance=bottleneck_distance(
            persistence_barcode(left, p, with_representatives=False),
            persistence_barcode(right, p, with_representatives=False),
        ),
    )
    if not report.passed:
        LOGGER.error(
            "Stabilitätslauf seed=%s verletzt die Schranke: %s, %s > %s",
            seed,
            report.canonical_distance,
            report.persistence_distance,
            report.sup_distance,
        )
    return report


def run_trials(
    config: StabilityConfig,
    *,
    simplices: Sequence[Simplex] | None = None,
    n_jobs: int | None = None,
    backend: BackendArg = None,
) -> list[TrialReport]:
    """One trial per seed ``config.seed, config.seed + 1, ...``; reports come back in seed order.

    Without ``simplices`` every trial draws its own random complex from its seed.
    """

    def trial(seed: int) -> TrialReport:
        complex_ = simplices
        if complex_ is None:
            complex_ = random_complex(
                random.Random(seed), config.max_vertices, config.max_dim, config.p_include
            )
        return stability_trial(
            complex_, seed, config.eps, config.dimension, kind=config.kind, backend=backend
        )

    seeds = list(range(config.seed, config.seed + config.trials))
    LOGGER.info(
        "Starte %s Stabilitätsläufe (eps=%s, p=%s)", len(seeds), config.eps, config.dimension
    )
    return parallel_map(trial, seeds, n_jobs)


def _born_cycle_survives(basis: ExactMatrix, column: int) -> ExactMatrix | None:
    """A harmonic cycle with support up to ``column`` and nonzero there, if ``basis`` has one."""

    tail = [row for k, row in enumerate(basis.row_dicts()) if k > column]
    kernel = kernel_basis(ExactMatrix.from_row_dicts(tail, basis.cols))
    combos = basis @ kernel
    for k, vector in enumerate(combos.columns):
        if any(row == column for row, _ in vector):
            return combos.select_columns([k])
    return None


def greedy_oracle_barcode(
    filtration: Filtration, p: int, *, backend: BackendArg = None
) -> Barcode:
    """Canonical barcode by the greedy construction on the one-simplex-per-step refinement.

    Each ``p``-simplex that closes a new cycle gives birth to exactly one bar. Among the
    cycles born with it the oracle keeps one that stays harmonic longest, found by bisection
    over later steps since staying harmonic is monotone in time. The spans are then mapped
    back to the original times and bars that collapse are dropped.
    """

    refined, steps = filtration.refine()
    bases = harmonic_bases(refined, p, backend=backend, n_jobs=1)
    last = len(bases) - 1
    tracker = IncrementalRank()
    bars: list[Bar] = []
    reps: list[Chain] = []

    for step, (simplex, _) in enumerate(refined.entries):
        if simplex.dimension != p:
            continue
        boundary = {
            refined.index[face].column: Fraction(sign) for sign, face in simplex.boundary_terms()
        }
        if p > 0 and tracker.add(boundary):
            continue
        column = refined.index[simplex].column

        lo, hi = step, last
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _born_cycle_survives(bases[mid].matrix, column) is None:
                hi = mid - 1
            else:
                lo = mid
        found = _born_cycle_survives(bases[lo].matrix, column)
        if found is None:
            raise InternalInvariantViolation(f"no harmonic cycle born with {simplex}")
        z = Chain.from_vector(p, bases[lo].simplices, found.column(0))
        span = harmonic_span(refined, z)
        birth = steps[span.start]
        death: TimeValue = INF if isinstance(span.end, Infinity) else steps[span.end]
        if birth < death:
            bars.append(Bar(p, birth, death))
            reps.append(z)
    return Barcode.build(p, bars, reps)


def cross_check_rank_table(
    filtration: Filtration, p: int, *, backend: BackendArg = None
) -> RankTable:
    """Recompute every ``r[i][j]`` through the kernel of ``[A | -B]`` and compare."""

    bases = harmonic_bases(filtration, p, backend=backend, n_jobs=1)
    table = rank_table(filtration, p, bases=bases, backend=backend, n_jobs=1)
    for i, row_basis in enumerate(bases):
        for j in range(i, len(bases)):
            rows = filtration.count_at(p, bases[j].time)
            expected = intersection_dim_via_kernel(
                row_basis.padded(rows), bases[j].matrix, backend=backend
            )
            if table.r(i, j) != expected:
                raise InternalInvariantViolation(
                    f"r({i},{j}) = {table.r(i, j)} but the kernel path gives {expected}"
                )
    return table


def check_invariants(filtration: Filtration, p: int, *, backend: BackendArg = None) -> Barcode:
    """Eckmann, alive count, span finality and the rank table cross-check on one instance."""

    table = cross_check_rank_table(filtration, p, backend=backend)
    betti = betti_table(filtration, p, backend=backend)
    for t, h in zip(table.times, table.h):
        if betti[t] != h:
            raise InternalInvariantViolation(f"dim Har_{p} = {h} but β_{p} = {betti[t]} at {t}")

    barcode = canonical_barcode(
        filtration, p, table=table, representatives=True, backend=backend, n_jobs=1
    )
    for t in table.times:
        if barcode.alive_at(t) != betti[t]:
            raise InternalInvariantViolation(f"{barcode.alive_at(t)} bars alive at {t}")
    for bar, rep in zip(barcode.bars, barcode.representatives or ()):
        if rep is None:
            continue
        span = harmonic_span(filtration, rep)
        if (span.start, span.end) != (bar.birth, bar.death) or not is_span_final(filtration, rep):
            raise InternalInvariantViolation(f"representative of {bar} spans {span}")
    return barcode


def instability_demo(
    scales: Sequence[Fraction | int] = (10, 100, 1000, 10000),
    *,
    p: int = 1,
    backend: BackendArg = None,
) -> list[InstabilityRow]:
    """Distances between the two swap-related filtrations as the late pages spread out."""

    rows: list[InstabilityRow] = []
    for scale in scales:
        left, right = swap_pair(scale), swap_pair(scale, swapped=True)
        subordinate = bottleneck_distance(
            subordinate_as_barcode(subordinate_barcode(left, p, backend=backend), p),
            subordinate_as_barcode(subordinate_barcode(right, p, backend=backend), p),
        )
        canonical = bottleneck_distance(
            canonical_barcode(left, p, backend=backend),
            canonical_barcode(right, p, backend=backend),
        )
        persistence = bottleneck_distance(
            persistence_barcode(left, p, with_representatives=False),
            persistence_barcode(right, p, with_representatives=False),
        )
        row = InstabilityRow.from_values(
            scale=Fraction(scale),
            swap=MonotoneFunction.from_filtration(left).sup_distance(
                MonotoneFunction.from_filtration(right)
            ),
            subordinate_distance=subordinate,
            canonical_distance=canonical,
            persistence_distance=persistence,
        )
        LOGGER.debug("Instabilität bei Skala %s: %s", scale, row.ratio)
        rows.append(row)
    return rows


__all__ = [
    "MonotoneFunction",
    "check_invariants",
    "cross_check_rank_table",
    "greedy_oracle_barcode",
    "instability_demo",
    "min_gap",
    "perturb",
    "random_complex",
    "random_filtration",
    "random_monotone_function",
    "run_trials",
    "stability_trial",
]
