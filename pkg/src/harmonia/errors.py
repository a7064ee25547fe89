"""Exception hierarchy shared by all harmonia modules."""

from __future__ import annotations

from collections.abc import Sequence


class HarmoniaError(Exception):
    """Base class for every error raised by harmonia."""


class FiltrationError(HarmoniaError, ValueError):
    """Invalid filtration input."""

    def __init__(
        self,
        message: str,
        *,
        line: int | None = None,
        simplex: Sequence[int] | None = None,
    ) -> None:
        location = f"line {line}: " if line is not None else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.simplex = tuple(simplex) if simplex is not None else None


class MalformedLine(FiltrationError):
    """A line or JSON entry does not have the ``<time> <v0> ... <vk>`` shape."""


class ClosureViolation(FiltrationError):
    """A face is missing or arrives after one of its cofaces."""


class DuplicateSimplex(FiltrationError):
    """Two entries name the same vertex set."""


class NonRationalTime(FiltrationError):
    """A time token is not a decimal or rational literal."""


class ChainError(HarmoniaError, ValueError):
    """A chain does not satisfy the precondition of an operation."""


class NotACycle(ChainError):
    pass


class ZeroChain(ChainError):
    pass


class DimensionMismatch(HarmoniaError, ValueError):
    """Two barcodes or chains live in different homology dimensions."""

    def __init__(self, left: int, right: int) -> None:
        super().__init__(f"dimension mismatch: {left} != {right}")
        self.left = left
        self.right = right


class TooLarge(HarmoniaError, ValueError):
    """Input exceeds what an exhaustive oracle accepts."""


class DocumentError(HarmoniaError, ValueError):
    """A barcode document does not match the schema."""


class InternalInvariantViolation(HarmoniaError, RuntimeError):
    """An invariant that holds for every valid input failed; always a bug."""


class RepairInfeasible(InternalInvariantViolation):
    """The representative repair system had no solution while the class was alive."""
