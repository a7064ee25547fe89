"""Elimination backends for ``harmonia.exactla``."""

from __future__ import annotations

from ..config import load_settings
from .base import EliminationBackend, RrefResult
from .sparse import IntegerRowReducer, SparseBackend
from .sympy_dense import DenseBackend

_BACKENDS: dict[str, EliminationBackend] = {
    SparseBackend.name: SparseBackend(),
    DenseBackend.name: DenseBackend(),
}


def get_backend(name: str | None = None) -> EliminationBackend:
    """Resolve a backend by name; ``None`` uses ``Settings.backend`` (default ``sparse``)."""

    if name is None:
        name = load_settings(env_file=None).backend
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown elimination backend: {name!r}") from None


__all__ = [
    "DenseBackend",
    "EliminationBackend",
    "IntegerRowReducer",
    "RrefResult",
    "SparseBackend",
    "get_backend",
]
