"""Observation taxonomy from standardized residuals and robust distances.

Each observation lands in exactly one of four regions of the
(robust distance, |standardized residual|) quadrant: regular, vertical
outlier (big residual only), good leverage (big distance only), or bad
leverage (both). Bad leverage points are always recommended for removal;
vertical outliers only when the residual is severe.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

from .core_stats import chi2_quantile
from .errors import LengthMismatch
from .ols import Dataset


class Classification(str, Enum):
    REGULAR = "Regular"
    VERTICAL_OUTLIER = "VerticalOutlier"
    GOOD_LEVERAGE = "GoodLeverage"
    BAD_LEVERAGE = "BadLeverage"


@dataclass(frozen=True)
class DiagnosticThresholds:
    """Flagging bands: residual cutoff in sigma units, distance quantile."""

    residual_cutoff: float = 2.5
    distance_quantile: float = 0.975
    severe_residual_cutoff: float = 4.0

    def __post_init__(self):
        if self.residual_cutoff <= 0.0:
            raise ValueError("residual_cutoff must be positive")
        if not 0.0 < self.distance_quantile < 1.0:
            raise ValueError("distance_quantile must lie in (0, 1)")
        if self.severe_residual_cutoff < self.residual_cutoff:
            raise ValueError("severe_residual_cutoff must be >= residual_cutoff")


@dataclass(frozen=True)
class DiagnosticRecord:
    row_label: str
    standardized_residual: float
    robust_distance: float
    residual_cutoff: float
    distance_cutoff: float
    classification: Classification
    drop_recommended: bool


def distance_cutoff(thresholds: DiagnosticThresholds, p: int) -> float:
    """Leverage cutoff sqrt(chi2_quantile(distance_quantile, p))."""
    return math.sqrt(chi2_quantile(thresholds.distance_quantile, p))


def classify(
    standardized_residual: float,
    robust_distance: float,
    thresholds: DiagnosticThresholds,
    p: int,
    row_label: str = "",
) -> DiagnosticRecord:
    """Place one observation in the four-way taxonomy.

    Boundary values count as exceeding (the outlier side is closed), so a
    residual sitting exactly on the band is flagged.
    """
    if p < 1:
        raise ValueError(f"predictor dimension p must be >= 1, got {p}")
    d_cut = distance_cutoff(thresholds, p)
    big_residual = abs(standardized_residual) >= thresholds.residual_cutoff
    big_distance = robust_distance >= d_cut
    if big_residual and big_distance:
        label = Classification.BAD_LEVERAGE
    elif big_residual:
        label = Classification.VERTICAL_OUTLIER
    elif big_distance:
        label = Classification.GOOD_LEVERAGE
    else:
        label = Classification.REGULAR
    drop = bool(
        label is Classification.BAD_LEVERAGE
        or (
            label is Classification.VERTICAL_OUTLIER
            and abs(standardized_residual) >= thresholds.severe_residual_cutoff
        )
    )
    return DiagnosticRecord(
        row_label=row_label,
        standardized_residual=float(standardized_residual),
        robust_distance=float(robust_distance),
        residual_cutoff=thresholds.residual_cutoff,
        distance_cutoff=d_cut,
        classification=label,
        drop_recommended=drop,
    )


def classify_all(lts_fit, mcd_estimate, data: Dataset, thresholds=None) -> list[DiagnosticRecord]:
    """One DiagnosticRecord per dataset row, in row order."""
    thresholds = thresholds or DiagnosticThresholds()
    residuals = lts_fit.standardized_residuals
    distances = mcd_estimate.robust_distances
    if not len(residuals) == len(distances) == data.n:
        raise LengthMismatch(
            f"{len(residuals)} residuals, {len(distances)} distances, {data.n} rows"
        )
    p = len(data.predictors)
    return [
        classify(residuals[i], distances[i], thresholds, p, row_label=data.row_labels[i])
        for i in range(data.n)
    ]


@dataclass(eq=False)
class PlotData:
    """Outlier-map points plus the two cutoff lines, JSON/TSV serializable."""

    points: list[dict]
    rd_cutoff: float
    sr_cutoff: float

    def to_json(self) -> str:
        return json.dumps(
            {"points": self.points, "rd_cutoff": self.rd_cutoff, "sr_cutoff": self.sr_cutoff}
        )

    def to_tsv(self) -> str:
        lines = ["label\trd\tsr\tclass\trd_cutoff\tsr_cutoff"]
        for pt in self.points:
            lines.append(
                f"{pt['label']}\t{pt['rd']!r}\t{pt['sr']!r}\t{pt['class']}"
                f"\t{self.rd_cutoff!r}\t{self.sr_cutoff!r}"
            )
        return "\n".join(lines) + "\n"


def outlier_map(records: list[DiagnosticRecord]) -> PlotData:
    """Plot data for the residual-versus-distance display."""
    if not records:
        raise ValueError("outlier_map needs at least one record")
    points = [
        {
            "label": rec.row_label,
            "rd": rec.robust_distance,
            "sr": rec.standardized_residual,
            "class": rec.classification.value,
        }
        for rec in records
    ]
    return PlotData(
        points=points,
        rd_cutoff=records[0].distance_cutoff,
        sr_cutoff=records[0].residual_cutoff,
    )
