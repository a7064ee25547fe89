"""Trial reports: JSON lines, a pandas summary and an Excel export."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path

import pandas as pd
from pydantic import BaseModel, ConfigDict, computed_field

from .complex import Infinity, TimeValue, format_time, parse_time
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("reports")


def _ratio(numerator: TimeValue, denominator: TimeValue) -> float | None:
    if isinstance(numerator, Infinity):
        return float("inf")
    if isinstance(denominator, Infinity) or not denominator:
        return None
    return float(numerator / denominator)


class TrialReport(BaseModel):
    """One stability trial. Exact values are kept as ``a/b`` strings."""

    model_config = ConfigDict(frozen=True)

    seed: int
    kind: str
    dimension: int
    requested_eps: str
    eps: str
    clamped: bool
    sup_distance: str
    canonical_distance: str
    persistence_distance: str
    canonical_pass: bool
    persistence_pass: bool
    canonical_ratio: float | None = None
    persistence_ratio: float | None = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.canonical_pass and self.persistence_pass

    @classmethod
    def from_values(
        cls,
        *,
        seed: int,
        kind: str,
        dimension: int,
        requested_eps: Fraction,
        eps: Fraction,
        sup_distance: Fraction,
        canonical_distance: TimeValue,
        persistence_distance: TimeValue,
    ) -> TrialReport:
        return cls(
            seed=seed,
            kind=kind,
            dimension=dimension,
            requested_eps=format_time(requested_eps),
            eps=format_time(eps),
            clamped=eps != requested_eps,
            sup_distance=format_time(sup_distance),
            canonical_distance=format_time(canonical_distance),
            persistence_distance=format_time(persistence_distance),
            canonical_pass=canonical_distance <= sup_distance,
            persistence_pass=persistence_distance <= sup_distance,
            canonical_ratio=_ratio(canonical_distance, sup_distance),
            persistence_ratio=_ratio(persistence_distance, sup_distance),
        )

    def exact(self, field: str) -> TimeValue:
        """An exact field parsed back to a number."""

        value = getattr(self, field)
        if value == "inf":
            return Infinity()
        return parse_time(value)


class InstabilityRow(BaseModel):
    """Distances between the two swap-related filtrations at one scale."""

    model_config = ConfigDict(frozen=True)

    scale: str
    swap: str
    subordinate_distance: str
    canonical_distance: str
    persistence_distance: str
    ratio: float | None = None

    @classmethod
    def from_values(
        cls,
        *,
        scale: Fraction,
        swap: Fraction,
        subordinate_distance: TimeValue,
        canonical_distance: TimeValue,
        persistence_distance: TimeValue,
    ) -> InstabilityRow:
        return cls(
            scale=format_time(scale),
            swap=format_time(swap),
            subordinate_distance=format_time(subordinate_distance),
            canonical_distance=format_time(canonical_distance),
            persistence_distance=format_time(persistence_distance),
            ratio=_ratio(subordinate_distance, canonical_distance),
        )


class TrialSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int
    passed: int
    failed_seeds: list[int]
    clamped: int
    max_canonical_ratio: float | None
    max_persistence_ratio: float | None


def to_json_lines(rows: Iterable[BaseModel]) -> str:
    return "".join(row.model_dump_json() + "\n" for row in rows)


def reports_frame(reports: Sequence[TrialReport]) -> pd.DataFrame:
    columns = list(TrialReport.model_fields) + ["passed"]
    return pd.DataFrame([report.model_dump() for report in reports], columns=columns)


def _max_or_none(series: pd.Series) -> float | None:
    cleaned = series.dropna()
    if cleaned.empty:
        return None
    return float(cleaned.max())


def summarize(reports: Sequence[TrialReport]) -> TrialSummary:
    """Counts and worst observed distance/ε ratios over a batch."""

    frame = reports_frame(reports)
    if frame.empty:
        return TrialSummary(
            trials=0,
            passed=0,
            failed_seeds=[],
            clamped=0,
            max_canonical_ratio=None,
            max_persistence_ratio=None,
        )
    failed = frame.loc[~frame["passed"], "seed"]
    summary = TrialSummary(
        trials=len(frame),
        passed=int(frame["passed"].sum()),
        failed_seeds=[int(seed) for seed in failed],
        clamped=int(frame["clamped"].sum()),
        max_canonical_ratio=_max_or_none(frame["canonical_ratio"]),
        max_persistence_ratio=_max_or_none(frame["persistence_ratio"]),
    )
    LOGGER.info("Stabilitätsläufe: %s von %s bestanden", summary.passed, summary.trials)
    return summary


def write_workbook(reports: Sequence[TrialReport], path: str | Path) -> None:
    """One row per trial on ``trials`` and the aggregate on ``summary``."""

    summary = summarize(reports).model_dump()
    summary["failed_seeds"] = ", ".join(str(seed) for seed in summary["failed_seeds"])
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        reports_frame(reports).to_excel(writer, sheet_name="trials", index=False)
        pd.DataFrame([summary]).to_excel(writer, sheet_name="summary", index=False)
    LOGGER.info("Arbeitsmappe gespeichert: %s", path)


__all__ = [
    "InstabilityRow",
    "TrialReport",
    "TrialSummary",
    "reports_frame",
    "summarize",
    "to_json_lines",
    "write_workbook",
]
