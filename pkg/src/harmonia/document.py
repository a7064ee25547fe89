"""JSON barcode documents with exact times and provenance."""

from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable, Mapping
from importlib.metadata import PackageNotFoundError, version

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .complex import INF, Simplex, TimeValue, format_time, parse_time
from .errors import DocumentError, FiltrationError
from .persistence import Bar, Barcode, Chain

SCHEMA_VERSION = 1


def tool_version() -> str:
    try:
        return version("harmonia")
    except PackageNotFoundError:
        return "0.1.0"


def _check_time(value: str) -> str:
    try:
        parse_time(value)
    except FiltrationError as exc:
        raise ValueError(str(exc)) from None
    return value


class RepresentativeTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    simplex: list[int] = Field(min_length=1)
    coefficient: str

    @field_validator("coefficient")
    @classmethod
    def _coefficient(cls, value: str) -> str:
        return _check_time(value)


class BarEntry(BaseModel):
    """``death`` is ``None`` for a bar that never dies."""

    model_config = ConfigDict(frozen=True)

    birth: str
    death: str | None = None
    representative: list[RepresentativeTerm] | None = None

    @field_validator("birth")
    @classmethod
    def _birth(cls, value: str) -> str:
        return _check_time(value)

    @field_validator("death")
    @classmethod
    def _death(cls, value: str | None) -> str | None:
        return None if value is None else _check_time(value)


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_sha256: str
    algorithm: str
    tool_version: str = Field(default_factory=tool_version)


class BarcodeDocument(BaseModel):
    """Bars per homology dimension; JSON object keys are the dimensions as strings."""

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    provenance: Provenance
    bars: dict[int, list[BarEntry]]

    @field_validator("schema_version")
    @classmethod
    def _supported(cls, value: int) -> int:
        if value != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {value}")
        return value


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _terms(chain: Chain, decimal: bool) -> list[RepresentativeTerm]:
    return [
        RepresentativeTerm(
            simplex=list(simplex.vertices), coefficient=format_time(value, decimal=decimal)
        )
        for simplex, value in chain.terms
    ]


def barcodes_to_document(
    barcodes: Iterable[Barcode],
    *,
    input_bytes: bytes,
    algorithm: str,
    representatives: bool = False,
    decimal: bool = False,
) -> BarcodeDocument:
    """Bars are written in (birth, death) order within each dimension."""

    bars: dict[int, list[BarEntry]] = {}
    for barcode in barcodes:
        reps = barcode.representatives or (None,) * len(barcode)
        ordered = sorted(zip(barcode.bars, reps), key=lambda item: item[0].sort_key())
        bars[barcode.dimension] = [
            BarEntry(
                birth=format_time(bar.birth, decimal=decimal),
                death=None if bar.is_infinite else format_time(bar.death, decimal=decimal),
                representative=(
                    _terms(rep, decimal) if representatives and rep is not None else None
                ),
            )
            for bar, rep in ordered
        ]
    provenance = Provenance(input_sha256=input_digest(input_bytes), algorithm=algorithm)
    return BarcodeDocument(provenance=provenance, bars=dict(sorted(bars.items())))


def _entry_bar(dimension: int, entry: BarEntry) -> Bar:
    death: TimeValue = INF if entry.death is None else parse_time(entry.death)
    return Bar(dimension, parse_time(entry.birth), death)


def _entry_chain(dimension: int, entry: BarEntry) -> Chain | None:
    if entry.representative is None:
        return None
    terms: Mapping[Simplex, str] = {
        Simplex(tuple(sorted(term.simplex))): term.coefficient for term in entry.representative
    }
    return Chain.from_mapping(dimension, terms)


def document_to_barcodes(document: BarcodeDocument) -> dict[int, Barcode]:
    out: dict[int, Barcode] = {}
    for dimension, entries in sorted(document.bars.items()):
        bars: list[Bar] = []
        reps: list[Chain | None] = []
        for entry in entries:
            try:
                bars.append(_entry_bar(dimension, entry))
                reps.append(_entry_chain(dimension, entry))
            except ValueError as exc:
                raise DocumentError(f"dimension {dimension}: {exc}") from None
        has_reps = any(rep is not None for rep in reps)
        out[dimension] = Barcode.build(dimension, bars, reps if has_reps else None)
    return out


def serialize_document(document: BarcodeDocument) -> str:
    """Pretty JSON; ``death: null`` is kept, absent representatives are left out."""

    data = document.model_dump(mode="json")
    for entries in data["bars"].values():
        for entry in entries:
            if entry["representative"] is None:
                del entry["representative"]
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def parse_document(data: bytes | str) -> BarcodeDocument:
    try:
        return BarcodeDocument.model_validate_json(data)
    except ValidationError as exc:
        raise DocumentError(f"invalid barcode document: {exc}") from None


def looks_like_document(data: bytes | str) -> bool:
    """Cheap sniff: JSON with a ``schema_version`` key."""

    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    return text.lstrip().startswith("{") and '"schema_version"' in text


__all__ = [
    "BarEntry",
    "BarcodeDocument",
    "Provenance",
    "RepresentativeTerm",
    "SCHEMA_VERSION",
    "barcodes_to_document",
    "document_to_barcodes",
    "input_digest",
    "looks_like_document",
    "parse_document",
    "serialize_document",
    "tool_version",
]
