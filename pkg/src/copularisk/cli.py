"""Command-line pipeline: preprocess -> fit -> compare -> risk -> stress ->
plotdata, driven by a JSON config with deterministic seeds.

Every command is idempotent: the same inputs, config and seed reproduce
every report byte for byte (the manifest's wall-clock stamp is the one
deliberate exception). Report CSVs round numbers to 6 decimal places;
the JSON twins keep full precision.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .copula import (
    FAMILIES,
    CopulaSpec,
    density_grid,
    fit_copula,
    pseudo_observations,
)
from .data import (
    DataError,
    ReturnPanel,
    align_panel,
    load_price_series,
    log_returns,
    panel_from_csv,
    panel_to_csv,
    summarize,
)
from .dcc import export_r_path, fit_dcc, forecast_correlation
from .garch import (
    GarchParams,
    fit_garch,
    forecast_sigma,
    innovation_pdf,
    innovation_quantile,
)
from .gof import TABLE5_COLUMNS, TABLE8_COLUMNS, aic, compare_families
from .mathcore import RandomStream
from .risk import (
    FittedModel,
    MarginalModel,
    build_risk_report,
    stress_test,
)

__all__ = ["RunConfig", "main", "cmd_preprocess", "cmd_fit", "cmd_compare",
           "cmd_risk", "cmd_stress", "cmd_plotdata"]

CONFIG_ENV_VAR = "COPULARISK_CONFIG"

# stream ids reserved per purpose so stages never share a sequence
STREAM_SCENARIOS = 0
STREAM_ENERGY = 1
STREAM_STRESS = 2

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_WARNINGS = 3


class CliError(RuntimeError):
    pass


@dataclass
class RunConfig:
    """Serializable run description; flags override file values, file
    values override these defaults."""

    data_dir: str = "."
    assets: Optional[List[str]] = None  # CSV file names; None = all *.csv
    alpha: float = 0.05
    families: List[str] = field(default_factory=lambda: list(FAMILIES))
    scenarios: int = 1_000_000
    seed: int = 42
    weights: Optional[List[float]] = None
    out_dir: str = "out"
    marginal_transform: str = "empirical"
    min_obs: int = 50
    innovation: str = "student-t"
    risk_family: Optional[str] = None
    workers: int = 1
    chunk_size: Optional[int] = None
    grid_resolution: int = 50
    store_sigma_path: bool = False
    strict: bool = False

    def validate(self) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise CliError("alpha must lie in (0, 0.5)")
        if self.scenarios < 10_000:
            raise CliError("scenarios must be at least 10000")
        for fam in self.families:
            if fam not in FAMILIES:
                raise CliError(f"unknown copula family {fam!r}")
        if self.marginal_transform not in ("empirical", "student-t"):
            raise CliError("marginal_transform must be 'empirical' or 'student-t'")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0.0) or abs(float(w.sum()) - 1.0) > 1e-12:
                raise CliError("weights must be non-negative and sum to 1")
        if self.risk_family is not None and self.risk_family not in FAMILIES:
            raise CliError(f"unknown risk family {self.risk_family!r}")
        if self.workers < 1:
            raise CliError("workers must be at least 1")

    @classmethod
    def load(cls, path: Optional[str], overrides: Dict) -> "RunConfig":
        values: Dict = {}
        if path is None:
            path = os.environ.get(CONFIG_ENV_VAR)
        if path:
            with open(path, "r", encoding="utf-8") as fh:
                values.update(json.load(fh))
        values.update({k: v for k, v in overrides.items() if v is not None})
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(values) - known
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        config = cls(**values)
        config.validate()
        return config


# ---------------------------------------------------------------------------
# formatting and manifest
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.6f}"
    return "" if value is None else str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])
    return path


def _write_json(path: Path, payload) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def _update_manifest(config: RunConfig, command: str,
                     inputs: Sequence[Path], outputs: Sequence[Path]) -> Path:
    out_dir = Path(config.out_dir)
    path = out_dir / "manifest.json"
    manifest = {}
    if path.exists():
        with open(path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    manifest["config"] = asdict(config)
    manifest.setdefault("versions", {})
    import pandas
    import scipy

    manifest["versions"].update({
        "copularisk": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pandas.__version__,
        "python": sys.version.split()[0],
    })
    manifest["created_at"] = dt.datetime.now(dt.timezone.utc).isoformat()
    manifest.setdefault("inputs", {})
    manifest.setdefault("outputs", {})
    manifest.setdefault("commands", [])
    for p in inputs:
        manifest["inputs"][str(p)] = _sha256(Path(p))
    for p in outputs:
        manifest["outputs"][str(p)] = _sha256(Path(p))
    if command not in manifest["commands"]:
        manifest["commands"].append(command)
    return _write_json(path, manifest)


def _alpha_header(kind: str, alpha: float) -> str:
    return f"{kind} (alpha={alpha:g})"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _input_files(config: RunConfig) -> List[Path]:
    base = Path(config.data_dir)
    if config.assets:
        files = [base / name for name in config.assets]
    else:
        files = sorted(base.glob("*.csv"))
    if len(files) < 2:
        raise CliError(f"need at least 2 asset files in {base}")
    for f in files:
        if not f.exists():
            raise CliError(f"missing data file {f}")
    return files


def cmd_preprocess(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Load prices, build the aligned panel, write Table 1/2 style
    summaries next to it."""
    files = _input_files(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    notes: List[Tuple[str, str]] = []

    series = []
    for f in files:
        prices = load_price_series(f)
        if prices.duplicates_collapsed:
            notes.append(("info", f"{prices.asset_id}: collapsed "
                          f"{prices.duplicates_collapsed} duplicate timestamps"))
        series.append(log_returns(prices))
    panel = align_panel(series, min_obs=config.min_obs)
    for dropped in panel.dropped_assets:
        notes.append(("info", f"dropped {dropped}: fewer than "
                      f"{config.min_obs} common observations"))
    if panel.n_assets < 2:
        raise CliError("fewer than 2 assets survive preprocessing")

    stats = summarize(panel)
    for asset in stats.undefined_assets:
        notes.append(("warning", f"{asset}: zero variance; correlations undefined"))

    panel_path = out_dir / "panel.csv"
    panel_to_csv(panel, panel_path)

    summary_rows = [
        [aid, stats.mean[i], stats.stddev[i],
         f"({stats.minimum[i]:.6f}, {stats.maximum[i]:.6f})"]
        for i, aid in enumerate(stats.asset_ids)
    ]
    summary_path = _write_csv(out_dir / "summary_stats.csv",
                              ["Asset", "Mean", "Std. Dev", "Min/Max"],
                              summary_rows)
    corr_rows = [[aid] + list(stats.correlation[i])
                 for i, aid in enumerate(stats.asset_ids)]
    corr_path = _write_csv(out_dir / "correlation_matrix.csv",
                           ["Asset"] + list(stats.asset_ids), corr_rows)
    _write_json(out_dir / "summary_stats.json", {
        "assets": stats.asset_ids,
        "mean": stats.mean.tolist(),
        "stddev": stats.stddev.tolist(),
        "min": stats.minimum.tolist(),
        "max": stats.maximum.tolist(),
        "correlation": stats.correlation.tolist(),
        "undefined_assets": stats.undefined_assets,
        "dropped_assets": panel.dropped_assets,
    })
    outputs = [panel_path, summary_path, corr_path, out_dir / "summary_stats.json"]
    _update_manifest(config, "preprocess", files, outputs)
    return outputs, notes


def _load_panel(config: RunConfig) -> ReturnPanel:
    path = Path(config.out_dir) / "panel.csv"
    if not path.exists():
        raise CliError(f"panel not found at {path}; run preprocess first")
    return panel_from_csv(path)


def cmd_fit(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Fit marginal GARCH models, DCC dynamics and every requested copula
    family; write the whole state to model.json."""
    panel = _load_panel(config)
    out_dir = Path(config.out_dir)
    notes: List[Tuple[str, str]] = []

    garch_fits = {}
    residuals = np.empty_like(panel.returns)
    for j, asset in enumerate(panel.asset_ids):
        fit = fit_garch(panel.returns[:, j], innovation=config.innovation)
        if not fit.converged:
            notes.append(("warning", f"garch fit for {asset} did not converge"))
        if not 0.8 <= fit.residual_variance <= 1.2:
            notes.append(("info", f"{asset}: residual variance "
                          f"{fit.residual_variance:.3f} outside the [0.8, 1.2] sanity band"))
        garch_fits[asset] = fit
        residuals[:, j] = fit.residuals

    dcc_fit = fit_dcc(residuals)
    if not dcc_fit.converged:
        notes.append(("warning", "dcc fit did not converge"))
    r_next = forecast_correlation(dcc_fit.params, dcc_fit.q_last, residuals[-1])

    u = pseudo_observations(residuals)
    copulas = {}
    for family in config.families:
        cfit = fit_copula(u, family)
        if not cfit.converged:
            notes.append(("warning", f"{family} copula fit did not converge"))
        copulas[family] = {
            "spec": cfit.spec.to_dict(),
            "loglik": cfit.loglik,
            "converged": cfit.converged,
            "composite": cfit.composite,
        }

    model = {
        "assets": panel.asset_ids,
        "n_obs": panel.n_obs,
        "first_date": panel.timestamps[0].isoformat(),
        "last_date": panel.timestamps[-1].isoformat(),
        "marginal_transform": config.marginal_transform,
        "garch": {
            asset: {
                **fit.to_dict(include_sigma=config.store_sigma_path),
                "sigma_forecast": float(forecast_sigma(fit, 1)[0]),
            }
            for asset, fit in garch_fits.items()
        },
        "dcc": {
            **dcc_fit.params.to_dict(),
            "loglik": dcc_fit.loglik,
            "converged": dcc_fit.converged,
            "q_last": dcc_fit.q_last.tolist(),
            "z_last": residuals[-1].tolist(),
            "r_forecast": r_next.tolist(),
        },
        "copulas": copulas,
        "residuals": residuals.tolist(),
    }
    model_path = _write_json(out_dir / "model.json", model)
    r_path_file = out_dir / "correlation_path.csv"
    export_r_path(dcc_fit, r_path_file, asset_ids=panel.asset_ids)
    outputs = [model_path, r_path_file]
    _update_manifest(config, "fit", [out_dir / "panel.csv"], outputs)
    return outputs, notes


def _load_model(config: RunConfig) -> dict:
    path = Path(config.out_dir) / "model.json"
    if not path.exists():
        raise CliError(f"model not found at {path}; run fit first")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _best_family_by_aic(model: dict) -> str:
    scores = {}
    for family, entry in model["copulas"].items():
        spec = CopulaSpec.from_dict(entry["spec"])
        scores[family] = aic(entry["loglik"], spec.parameter_count())
    return min(scores, key=scores.get)


def _fitted_model(config: RunConfig, model: dict) -> FittedModel:
    assets = model["assets"]
    residuals = np.asarray(model["residuals"], dtype=float)
    marginals = []
    for j, asset in enumerate(assets):
        entry = model["garch"][asset]
        params = GarchParams.from_dict(entry)
        marginals.append(MarginalModel(
            asset_id=asset,
            params=params,
            sigma_forecast=float(entry["sigma_forecast"]),
            residuals=residuals[:, j],
        ))
    copulas = {fam: CopulaSpec.from_dict(entry["spec"])
               for fam, entry in model["copulas"].items()}
    family = config.risk_family or _best_family_by_aic(model)
    if family not in copulas:
        raise CliError(f"family {family!r} is not in the fitted model")
    return FittedModel(
        marginals=marginals,
        copulas=copulas,
        r_forecast=np.asarray(model["dcc"]["r_forecast"], dtype=float),
        family=family,
        transform=model.get("marginal_transform", config.marginal_transform),
    )


def cmd_compare(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Family comparison tables (Table 5 and Table 8 schemas) from the
    fitted residual panel."""
    model = _load_model(config)
    out_dir = Path(config.out_dir)
    residuals = np.asarray(model["residuals"], dtype=float)
    u = pseudo_observations(residuals)
    report = compare_families(
        u,
        families=config.families,
        stream=RandomStream(config.seed, STREAM_ENERGY),
        asset_ids=model["assets"],
    )
    notes = [("warning", f"{fam.family} family failed: {fam.error}")
             for fam in report.families if fam.error]

    tab5 = _write_csv(out_dir / "family_comparison.csv", TABLE5_COLUMNS,
                      report.table5_rows())
    tab8 = _write_csv(out_dir / "gof_metrics.csv", TABLE8_COLUMNS,
                      report.table8_rows())
    pair_rows = [[f"{p.pair[0]}-{p.pair[1]}", p.pearson, p.spearman, p.kendall]
                 for p in report.pairs]
    pairs_path = _write_csv(out_dir / "pair_correlations.csv",
                            ["Pair", "Pearson Corr", "Spearman Corr", "Kendall's Tau"],
                            pair_rows)
    payload = {
        "rank_by": report.rank_by,
        "n_obs": report.n_obs,
        "dim": report.dim,
        "mean_pearson": report.mean_pearson,
        "mean_spearman": report.mean_spearman,
        "mean_kendall": report.mean_kendall,
        "families": [
            {
                "family": fam.family,
                "loglik": fam.loglik,
                "aic": fam.aic,
                "bic": fam.bic,
                "energy": fam.energy,
                "lambda_lower": fam.lambda_lower,
                "lambda_upper": fam.lambda_upper,
                "converged": fam.converged,
                "composite": fam.composite,
                "error": fam.error,
                "spec": fam.spec.to_dict() if fam.spec else None,
            }
            for fam in report.families
        ],
        "pairs": [
            {"pair": list(p.pair), "pearson": p.pearson,
             "spearman": p.spearman, "kendall": p.kendall}
            for p in report.pairs
        ],
    }
    gof_json = _write_json(out_dir / "gof_metrics.json", payload)
    outputs = [tab5, tab8, pairs_path, gof_json]
    _update_manifest(config, "compare", [out_dir / "model.json"], outputs)
    return outputs, notes


def cmd_risk(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Risk tables: per-asset VaR/CVaR (Table 3), the market-stress CoVaR
    table with its systemic-impact footer (Table 4), and the portfolio
    comparison (Table 7)."""
    model = _load_model(config)
    out_dir = Path(config.out_dir)
    fitted = _fitted_model(config, model)
    report = build_risk_report(
        fitted,
        alpha=config.alpha,
        n_scenarios=config.scenarios,
        stream=RandomStream(config.seed, STREAM_SCENARIOS),
        weights=config.weights,
    )

    var_h = _alpha_header("VaR", config.alpha)
    cvar_h = _alpha_header("CVaR", config.alpha)
    risk_rows = [[a, report.var[a], report.cvar[a]] for a in report.asset_ids]
    risk_rows.append(["High-Corr Portfolio", report.portfolio_var, report.portfolio_cvar])
    tab3 = _write_csv(out_dir / "risk_metrics.csv", ["Asset", var_h, cvar_h], risk_rows)

    covar_rows = [[r.target, r.var, r.covar, r.delta] for r in report.covar_rows]
    covar_rows.append(["Systemic Impact", None, None, report.systemic])
    tab4 = _write_csv(out_dir / "covar_metrics.csv",
                      ["Asset", "VaR", "CoVaR", "ΔCoVaR"], covar_rows)

    port_rows = [["High-Corr Portfolio", report.portfolio_var, report.portfolio_cvar]]
    port_rows += [[a, report.var[a], report.cvar[a]] for a in report.asset_ids]
    tab7 = _write_csv(out_dir / "portfolio_comparison.csv",
                      ["Asset/Portfolio", var_h, cvar_h], port_rows)

    payload = {
        "alpha": report.alpha,
        "family": report.family,
        "n_scenarios": report.n_scenarios,
        "var": report.var,
        "cvar": report.cvar,
        "portfolio": {"var": report.portfolio_var, "cvar": report.portfolio_cvar},
        "covar": [
            {"conditioning": r.conditioning, "target": r.target,
             "var": r.var, "covar": r.covar, "delta_covar": r.delta}
            for r in report.covar_rows
        ],
        "systemic_impact": report.systemic,
    }
    risk_json = _write_json(out_dir / "risk_metrics.json", payload)
    outputs = [tab3, tab4, tab7, risk_json]
    _update_manifest(config, "risk", [out_dir / "model.json"], outputs)
    return outputs, []


def cmd_stress(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Stress tables conditioning on each asset in turn (Table 6 summary
    plus one detailed CoVaR table per conditioning asset)."""
    model = _load_model(config)
    out_dir = Path(config.out_dir)
    fitted = _fitted_model(config, model)
    stream = RandomStream(config.seed, STREAM_STRESS)
    from .risk import _required_scenarios, simulate_joint

    n = _required_scenarios(config.scenarios, config.alpha)
    scenarios = simulate_joint(fitted, n, stream, chunk_size=config.chunk_size)

    outputs: List[Path] = []
    summary_rows = []
    for j, asset in enumerate(fitted.asset_ids):
        table = stress_test(fitted, j, config.alpha, scenarios=scenarios)
        rows = [[r.target, r.var, r.covar, r.delta] for r in table.rows]
        rows.append(["Systemic Impact", None, None, table.systemic_impact])
        safe = asset.replace(" ", "_").replace("/", "_")
        outputs.append(_write_csv(out_dir / f"stress_{safe}.csv",
                                  ["Asset", "VaR", "CoVaR", "ΔCoVaR"], rows))
        summary_rows.append([asset, table.systemic_impact])
    summary = _write_csv(out_dir / "stress_summary.csv",
                         ["Conditioning Asset", "Systemic Impact (sum ΔCoVaR)"],
                         summary_rows)
    outputs.append(summary)
    _write_json(out_dir / "stress_summary.json", {
        "alpha": config.alpha,
        "n_scenarios": n,
        "systemic_impact": {row[0]: row[1] for row in summary_rows},
    })
    outputs.append(out_dir / "stress_summary.json")
    _update_manifest(config, "stress", [out_dir / "model.json"], outputs)
    return outputs, []


def cmd_plotdata(config: RunConfig) -> Tuple[List[Path], List[Tuple[str, str]]]:
    """Plot-ready CSV bundles: copula density contour grids, QQ data per
    asset, and marginal histogram overlays."""
    model = _load_model(config)
    out_dir = Path(config.out_dir)
    panel = _load_panel(config)
    residuals = np.asarray(model["residuals"], dtype=float)
    assets = model["assets"]
    res = config.grid_resolution
    outputs: List[Path] = []

    for family, entry in model["copulas"].items():
        spec = CopulaSpec.from_dict(entry["spec"])
        if spec.dim > 2:
            # project onto the first asset pair for the contour export
            if spec.is_elliptical:
                sub = spec.sigma[np.ix_([0, 1], [0, 1])]
                spec = CopulaSpec(spec.family, 2, sigma=sub, nu=spec.nu)
            else:
                spec = CopulaSpec(spec.family, 2, theta=spec.theta)
        grid = density_grid(spec, resolution=res)
        rows = [[u, v, d] for u, v, d in grid]
        outputs.append(_write_csv(out_dir / f"density_{family}.csv",
                                  ["u", "v", "density"], rows))

    for j, asset in enumerate(assets):
        params = GarchParams.from_dict(model["garch"][asset])
        z = np.sort(residuals[:, j])
        t_len = z.size
        levels = (np.arange(1, t_len + 1) - 0.5) / t_len
        theo = innovation_quantile(params, levels)
        safe = asset.replace(" ", "_").replace("/", "_")
        rows = [[levels[i], z[i], theo[i]] for i in range(t_len)]
        outputs.append(_write_csv(out_dir / f"qq_{safe}.csv",
                                  ["quantile_level", "empirical", "theoretical"], rows))

        r = panel.returns[:, j]
        counts, edges = np.histogram(r, bins=50, density=True)
        centers = 0.5 * (edges[:-1] + edges[1:])
        sig_u = math.sqrt(params.unconditional_variance)
        fitted = innovation_pdf(params, (centers - params.mu) / sig_u) / sig_u
        rows = [[centers[i], counts[i], fitted[i]] for i in range(len(centers))]
        outputs.append(_write_csv(out_dir / f"marginal_hist_{safe}.csv",
                                  ["bin_center", "observed_density", "fitted_density"],
                                  rows))

    _update_manifest(config, "plotdata",
                     [out_dir / "model.json", out_dir / "panel.csv"], outputs)
    return outputs, []


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_COMMANDS = {
    "preprocess": cmd_preprocess,
    "fit": cmd_fit,
    "compare": cmd_compare,
    "risk": cmd_risk,
    "stress": cmd_stress,
    "plotdata": cmd_plotdata,
}

_PIPELINE = ("preprocess", "fit", "compare", "risk", "stress", "plotdata")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copularisk",
        description="Copula-DCC-GARCH risk pipeline",
    )
    parser.add_argument("command", choices=list(_COMMANDS) + ["all"])
    parser.add_argument("--config", help=f"JSON config path (or ${CONFIG_ENV_VAR})")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--scenarios", type=int)
    parser.add_argument("--families", help="comma-separated copula families")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--data", help="input data directory")
    parser.add_argument("--workers", type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        "seed": args.seed,
        "alpha": args.alpha,
        "scenarios": args.scenarios,
        "families": args.families.split(",") if args.families else None,
        "out_dir": args.out,
        "data_dir": args.data,
        "workers": args.workers,
    }
    try:
        config = RunConfig.load(args.config, overrides)
    except (CliError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    Path(config.out_dir).mkdir(parents=True, exist_ok=True)
    commands = _PIPELINE if args.command == "all" else (args.command,)
    warning_count = 0
    try:
        for name in commands:
            outputs, notes = _COMMANDS[name](config)
            for p in outputs:
                print(f"wrote {p}")
            for level, message in notes:
                print(f"{level}: {message}", file=sys.stderr)
                if level == "warning":
                    warning_count += 1
    except (CliError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    if warning_count:
        return EXIT_FAILURE if config.strict else EXIT_WARNINGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
