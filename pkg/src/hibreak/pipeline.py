"""End-to-end analysis: OLS, LTS flagging, MCD leverage, drop, refit, report.

The report pairs the all-rows OLS fit with the refit on the rows that
survive the diagnostic drop rule, in the two-panel layout of the classical
comparison tables, and echoes every parameter the analysis used (including
defaulted ones) so that no threshold stays silent.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import lts as lts_mod
from . import mcd as mcd_mod
from .diagnostics import (
    Classification,
    DiagnosticRecord,
    DiagnosticThresholds,
    classify_all,
    distance_cutoff,
)
from .errors import (
    DuplicateLabel,
    HibreakError,
    MissingColumn,
    ParseError,
    PipelineStageError,
)
from .lts import LtsConfig, fit_lts
from .mcd import McdConfig, fit_mcd
from .ols import Dataset, RegressionFit, fit_ols


@dataclass(frozen=True)
class ModelSpec:
    response: str
    predictors: tuple[str, ...]
    has_intercept: bool = True

    def __post_init__(self):
        object.__setattr__(self, "predictors", tuple(self.predictors))
        if not self.predictors:
            raise ValueError("model needs at least one predictor column")


@dataclass(frozen=True)
class AnalysisConfig:
    model: ModelSpec
    lts: LtsConfig = field(default_factory=LtsConfig)
    mcd: McdConfig = field(default_factory=McdConfig)
    thresholds: DiagnosticThresholds = field(default_factory=DiagnosticThresholds)
    output_format: str = "markdown"

    def __post_init__(self):
        if self.output_format not in ("json", "markdown", "tsv"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass(frozen=True)
class DroppedRow:
    label: str
    reason: str


@dataclass(eq=False)
class AnalysisReport:
    ols_fit: RegressionFit
    diagnostics: list[DiagnosticRecord]
    dropped: list[DroppedRow]
    robust_fit: RegressionFit
    config_echo: dict
    comparison: dict


def load_csv(path: str, model: ModelSpec) -> Dataset:
    """Read a dataset: header row, label column first, numeric cells.

    ParseError carries the 1-based data row and the offending column name;
    NaN and infinite cells are rejected.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ParseError(0, "", "file has no header row")
        columns = tuple(name.strip() for name in header[1:])
        labels: list[str] = []
        rows: list[list[float]] = []
        for i, raw in enumerate(reader, start=1):
            if not raw:
                continue
            if len(raw) != len(header):
                raise ParseError(i, "", f"row {i} has {len(raw)} cells, expected {len(header)}")
            label = raw[0].strip()
            if label in labels:
                raise DuplicateLabel(label)
            parsed = []
            for name, cell in zip(columns, raw[1:]):
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(i, name) from None
                if not math.isfinite(value):
                    raise ParseError(i, name, f"non-finite value at row {i}, column {name!r}")
                parsed.append(value)
            labels.append(label)
            rows.append(parsed)
    for name in (model.response, *model.predictors):
        if name not in columns:
            raise MissingColumn(name)
    return Dataset(
        row_labels=tuple(labels),
        column_names=columns,
        response=model.response,
        predictors=model.predictors,
        values=np.array(rows, dtype=float),
        has_intercept=model.has_intercept,
    )


def _config_echo(data: Dataset, config: AnalysisConfig) -> dict:
    n, k, p = data.n, data.k, len(data.predictors)
    h_lts = lts_mod.trimmed_size(n, k, config.lts.alpha)
    h_mcd = mcd_mod.subset_size(n, config.mcd.h_fraction)
    return {
        "model": {
            "response": config.model.response,
            "predictors": list(config.model.predictors),
            "has_intercept": config.model.has_intercept,
        },
        "lts": {
            "alpha": config.lts.alpha,
            "n_starts": config.lts.n_starts,
            "n_best_kept": config.lts.n_best_kept,
            "seed": config.lts.seed,
            "max_csteps": config.lts.max_csteps,
            "h": h_lts,
            "consistency_factor": lts_mod.consistency_factor(h_lts, n),
        },
        "mcd": {
            "h_fraction": config.mcd.h_fraction,
            "n_starts": config.mcd.n_starts,
            "n_best_kept": config.mcd.n_best_kept,
            "seed": config.mcd.seed,
            "max_csteps": config.mcd.max_csteps,
            "h": h_mcd,
            "consistency_factor": mcd_mod.scatter_consistency_factor(h_mcd, n, p),
        },
        "thresholds": {
            "residual_cutoff": config.thresholds.residual_cutoff,
            "distance_quantile": config.thresholds.distance_quantile,
            "severe_residual_cutoff": config.thresholds.severe_residual_cutoff,
            "distance_cutoff": distance_cutoff(config.thresholds, p),
        },
        "output_format": config.output_format,
    }


def _fit_summary(fit: RegressionFit) -> dict:
    return {
        "r_squared": fit.r_squared,
        "f_value": fit.f_value,
        "sigma": fit.sigma,
        "n_used": fit.n_used,
    }


def _comparison(ols: RegressionFit, robust: RegressionFit) -> dict:
    rows = []
    for j, name in enumerate(ols.coefficient_names):
        rows.append(
            {
                "name": name,
                "ols": {
                    "coeff": float(ols.coefficients[j]),
                    "se": float(ols.standard_errors[j]),
                    "t": float(ols.t_values[j]),
                    "p": float(ols.p_values[j]),
                },
                "robust": {
                    "coeff": float(robust.coefficients[j]),
                    "se": float(robust.standard_errors[j]),
                    "t": float(robust.t_values[j]),
                    "p": float(robust.p_values[j]),
                },
            }
        )
    return {"rows": rows, "ols": _fit_summary(ols), "robust": _fit_summary(robust)}


def run_analysis(data: Dataset, config: AnalysisConfig) -> AnalysisReport:
    """OLS on all rows, LTS + MCD flagging, drop recommended rows, refit.

    Leverage distances come from the predictor columns only (never the
    intercept); exactly the drop-recommended rows are excluded from the
    refit. Deterministic for fixed seeds. Stage failures re-raise as
    PipelineStageError naming the stage.
    """
    if data.response != config.model.response or data.predictors != config.model.predictors:
        raise ValueError("config model does not match the dataset's designations")

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HibreakError as err:
            raise PipelineStageError(name, err) from err

    ols_fit = stage("ols", fit_ols, data)
    lts_fit = stage("lts", fit_lts, data, config.lts)
    mcd_est = stage("mcd", fit_mcd, data.predictor_matrix(), config.mcd)
    records = stage("diagnostics", classify_all, lts_fit, mcd_est, data, config.thresholds)

    dropped = [
        DroppedRow(
            label=rec.row_label,
            reason=(
                f"{rec.classification.value}: abs(standardized residual)="
                f"{abs(rec.standardized_residual):.4g}, robust distance="
                f"{rec.robust_distance:.4g}"
            ),
        )
        for rec in records
        if rec.drop_recommended
    ]
    robust_fit = stage("refit", fit_ols, data, {row.label for row in dropped})

    return AnalysisReport(
        ols_fit=ols_fit,
        diagnostics=records,
        dropped=dropped,
        robust_fit=robust_fit,
        config_echo=_config_echo(data, config),
        comparison=_comparison(ols_fit, robust_fit),
    )


# ---------------------------------------------------------------------------
# Serialization and rendering
# ---------------------------------------------------------------------------

def _fit_to_dict(fit: RegressionFit) -> dict:
    return {
        "coefficient_names": list(fit.coefficient_names),
        "coefficients": [float(v) for v in fit.coefficients],
        "standard_errors": [float(v) for v in fit.standard_errors],
        "t_values": [float(v) for v in fit.t_values],
        "p_values": [float(v) for v in fit.p_values],
        "residuals": [float(v) for v in fit.residuals],
        "sigma": fit.sigma,
        "r_squared": fit.r_squared,
        "f_value": fit.f_value,
        "n_used": fit.n_used,
        "dropped_labels": list(fit.dropped_labels),
        "predictors": list(fit.predictors),
        "has_intercept": fit.has_intercept,
        "df_resid": fit.df_resid,
    }


def _fit_from_dict(d: dict) -> RegressionFit:
    return RegressionFit(
        coefficient_names=tuple(d["coefficient_names"]),
        coefficients=np.array(d["coefficients"], dtype=float),
        standard_errors=np.array(d["standard_errors"], dtype=float),
        t_values=np.array(d["t_values"], dtype=float),
        p_values=np.array(d["p_values"], dtype=float),
        residuals=np.array(d["residuals"], dtype=float),
        sigma=d["sigma"],
        r_squared=d["r_squared"],
        f_value=d["f_value"],
        n_used=d["n_used"],
        dropped_labels=tuple(d["dropped_labels"]),
        predictors=tuple(d["predictors"]),
        has_intercept=d["has_intercept"],
        df_resid=d["df_resid"],
    )


def report_to_dict(report: AnalysisReport) -> dict:
    return {
        "config": report.config_echo,
        "ols": _fit_to_dict(report.ols_fit),
        "robust": _fit_to_dict(report.robust_fit),
        "diagnostics": [
            {
                "label": rec.row_label,
                "sr": rec.standardized_residual,
                "rd": rec.robust_distance,
                "sr_cutoff": rec.residual_cutoff,
                "rd_cutoff": rec.distance_cutoff,
                "class": rec.classification.value,
                "drop": rec.drop_recommended,
            }
            for rec in report.diagnostics
        ],
        "dropped": [{"label": row.label, "reason": row.reason} for row in report.dropped],
        "comparison": report.comparison,
    }


def report_from_json(text: str) -> AnalysisReport:
    """Rebuild a report from its JSON rendering (lossless round trip)."""
    d = json.loads(text)
    return AnalysisReport(
        ols_fit=_fit_from_dict(d["ols"]),
        robust_fit=_fit_from_dict(d["robust"]),
        diagnostics=[
            DiagnosticRecord(
                row_label=rec["label"],
                standardized_residual=rec["sr"],
                robust_distance=rec["rd"],
                residual_cutoff=rec["sr_cutoff"],
                distance_cutoff=rec["rd_cutoff"],
                classification=Classification(rec["class"]),
                drop_recommended=rec["drop"],
            )
            for rec in d["diagnostics"]
        ],
        dropped=[DroppedRow(label=row["label"], reason=row["reason"]) for row in d["dropped"]],
        config_echo=d["config"],
        comparison=d["comparison"],
    )


def _sig(value, signed=False) -> str:
    """Render a number with 4 significant decimals; optionally force a sign."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return f"{value:+d}" if signed else str(value)
    return f"{value:+.4g}" if signed else f"{value:.4g}"


def _render_markdown(report: AnalysisReport, oracle: dict | None) -> str:
    echo = report.config_echo
    model = echo["model"]
    terms = (["const"] if model["has_intercept"] else []) + list(model["predictors"])
    out = ["# Robust regression report", ""]
    out.append(
        f"Model: {model['response']} ~ {' + '.join(terms)}"
        f" (n = {report.ols_fit.n_used})"
    )
    out.append("")
    out.append("## Coefficient comparison")
    out.append("")
    out.append(
        "| Var. | OLS Coeff. | S.E. | t-value | P-value "
        "| ROBUST Coeff. | S.E. | t-value | P-value |"
    )
    out.append("|---|---|---|---|---|---|---|---|---|")
    for row in report.comparison["rows"]:
        o, r = row["ols"], row["robust"]
        out.append(
            f"| {row['name']} | {_sig(o['coeff'], signed=True)} | {_sig(o['se'])} "
            f"| {_sig(o['t'], signed=True)} | {_sig(o['p'])} "
            f"| {_sig(r['coeff'], signed=True)} | {_sig(r['se'])} "
            f"| {_sig(r['t'], signed=True)} | {_sig(r['p'])} |"
        )
    out.append("")
    out.append("| | OLS | ROBUST |")
    out.append("|---|---|---|")
    for key, title in (
        ("r_squared", "R^2"),
        ("f_value", "F-value"),
        ("sigma", "sigma"),
        ("n_used", "n used"),
    ):
        out.append(
            f"| {title} | {_sig(report.comparison['ols'][key])} "
            f"| {_sig(report.comparison['robust'][key])} |"
        )
    out.append("")
    out.append("## Diagnostics")
    out.append("")
    out.append("| Row | Std. residual | Robust distance | Class | Drop |")
    out.append("|---|---|---|---|---|")
    for rec in report.diagnostics:
        out.append(
            f"| {rec.row_label} | {_sig(rec.standardized_residual, signed=True)} "
            f"| {_sig(rec.robust_distance)} | {rec.classification.value} "
            f"| {'yes' if rec.drop_recommended else 'no'} |"
        )
    out.append("")
    out.append("## Dropped observations")
    out.append("")
    if report.dropped:
        out.append("| Row | Reason |")
        out.append("|---|---|")
        for row in report.dropped:
            out.append(f"| {row.label} | {row.reason} |")
    else:
        out.append("none")
    out.append("")
    out.append("## Configuration")
    out.append("")
    lts_echo, mcd_echo, thr = echo["lts"], echo["mcd"], echo["thresholds"]
    out.append(
        f"- lts: alpha={lts_echo['alpha']}, h={lts_echo['h']}, "
        f"n_starts={lts_echo['n_starts']}, n_best_kept={lts_echo['n_best_kept']}, "
        f"seed={lts_echo['seed']}, max_csteps={lts_echo['max_csteps']}, "
        f"consistency_factor={_sig(lts_echo['consistency_factor'])}"
    )
    out.append(
        f"- mcd: h_fraction={mcd_echo['h_fraction']}, h={mcd_echo['h']}, "
        f"n_starts={mcd_echo['n_starts']}, n_best_kept={mcd_echo['n_best_kept']}, "
        f"seed={mcd_echo['seed']}, max_csteps={mcd_echo['max_csteps']}, "
        f"consistency_factor={_sig(mcd_echo['consistency_factor'])}"
    )
    out.append(
        f"- thresholds: residual_cutoff={thr['residual_cutoff']}, "
        f"severe_residual_cutoff={thr['severe_residual_cutoff']}, "
        f"distance_quantile={thr['distance_quantile']}, "
        f"distance_cutoff={_sig(thr['distance_cutoff'])}"
    )
    if oracle is not None:
        out.append("")
        out.append("## Oracle check")
        out.append("")
        for name, block in sorted(oracle.items()):
            out.append(
                f"- {name}: heuristic={block['heuristic_objective']!r}, "
                f"exact={block['exact_objective']!r}, match={block['match']}"
            )
    out.append("")
    return "\n".join(out)


def _render_tsv(report: AnalysisReport, oracle: dict | None) -> str:
    rows = [
        ["var", "ols_coeff", "ols_se", "ols_t", "ols_p",
         "robust_coeff", "robust_se", "robust_t", "robust_p"]
    ]
    for row in report.comparison["rows"]:
        o, r = row["ols"], row["robust"]
        rows.append(
            [row["name"],
             _sig(o["coeff"], signed=True), _sig(o["se"]),
             _sig(o["t"], signed=True), _sig(o["p"]),
             _sig(r["coeff"], signed=True), _sig(r["se"]),
             _sig(r["t"], signed=True), _sig(r["p"])]
        )
    for key in ("r_squared", "f_value", "sigma", "n_used"):
        rows.append(
            [key, _sig(report.comparison["ols"][key]), "-", "-", "-",
             _sig(report.comparison["robust"][key]), "-", "-", "-"]
        )
    if oracle is not None:
        for name, block in sorted(oracle.items()):
            rows.append(
                [f"oracle_{name}", repr(block["heuristic_objective"]), "-", "-", "-",
                 repr(block["exact_objective"]), "-", "-", "-"]
            )
    return "\n".join("\t".join(row) for row in rows) + "\n"


def render_report(report: AnalysisReport, fmt: str, oracle: dict | None = None) -> str:
    """Render a report as markdown, lossless JSON, or machine-joinable TSV."""
    if fmt == "json":
        d = report_to_dict(report)
        if oracle is not None:
            d["oracle"] = oracle
        return json.dumps(d, sort_keys=True, indent=2)
    if fmt == "markdown":
        return _render_markdown(report, oracle)
    if fmt == "tsv":
        return _render_tsv(report, oracle)
    raise ValueError(f"unknown output format {fmt!r}")
