"""Zentrale Exporte für das ``harmonia``-Paket."""

from .complex import INF, Filtration, Simplex, format_filtration, parse_filtration
from .errors import (
    ClosureViolation,
    DimensionMismatch,
    FiltrationError,
    HarmoniaError,
    InternalInvariantViolation,
)
from .harmonic import (
    canonical_barcode,
    harmonic_basis,
    harmonic_span,
    rank_table,
    subordinate_barcode,
)
from .metrics import bottleneck, bottleneck_bruteforce, bottleneck_distance
from .persistence import Bar, Barcode, Chain, persistence_barcode
from .utils.logging_setup import setup_logger

__all__ = [
    "INF",
    "Bar",
    "Barcode",
    "Chain",
    "ClosureViolation",
    "DimensionMismatch",
    "Filtration",
    "FiltrationError",
    "HarmoniaError",
    "InternalInvariantViolation",
    "Simplex",
    "bottleneck",
    "bottleneck_bruteforce",
    "bottleneck_distance",
    "canonical_barcode",
    "format_filtration",
    "harmonic_basis",
    "harmonic_span",
    "parse_filtration",
    "persistence_barcode",
    "rank_table",
    "setup_logger",
    "subordinate_barcode",
]
