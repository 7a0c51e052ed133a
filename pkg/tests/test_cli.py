import csv
import json
from pathlib import Path

import numpy as np
import pytest

from copularisk.cli import CONFIG_ENV_VAR, RunConfig, main
from conftest import ASSETS, write_config, write_fixture_prices


def read_rows(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestConfig:
    def test_defaults_valid(self):
        RunConfig().validate()

    def test_bad_alpha(self):
        with pytest.raises(Exception):
            RunConfig(alpha=0.7).validate()

    def test_scenario_floor(self):
        with pytest.raises(Exception):
            RunConfig(scenarios=5000).validate()

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"no_such_key": 1}', encoding="utf-8")
        assert main(["preprocess", "--config", str(cfg)]) == 1

    def test_env_var_config(self, tmp_path, monkeypatch):
        data_dir = tmp_path / "data"
        out_dir = tmp_path / "out"
        write_fixture_prices(data_dir, n_days=80)
        cfg = write_config(tmp_path / "c.json", data_dir, out_dir)
        monkeypatch.setenv(CONFIG_ENV_VAR, str(cfg))
        assert main(["preprocess"]) == 0
        assert (out_dir / "panel.csv").exists()


class TestPreprocess:
    def test_outputs_and_row_count(self, tmp_path):
        data_dir = tmp_path / "data"
        out_dir = tmp_path / "out"
        write_fixture_prices(data_dir, n_days=120)
        cfg = write_config(tmp_path / "c.json", data_dir, out_dir)
        assert main(["preprocess", "--config", str(cfg)]) == 0
        rows = read_rows(out_dir / "panel.csv")
        assert rows[0] == ["timestamp"] + list(ASSETS)
        assert len(rows) - 1 == 119  # returns = days - 1
        assert (out_dir / "summary_stats.csv").exists()
        assert (out_dir / "correlation_matrix.csv").exists()

    def test_short_asset_excluded_and_logged(self, tmp_path, capsys):
        data_dir = tmp_path / "data"
        out_dir = tmp_path / "out"
        write_fixture_prices(data_dir, n_days=120, short_asset=True)
        cfg = write_config(tmp_path / "c.json", data_dir, out_dir)
        assert main(["preprocess", "--config", str(cfg)]) == 0
        captured = capsys.readouterr()
        assert "tiny_co" in captured.err
        header = read_rows(out_dir / "panel.csv")[0]
        assert "tiny_co" not in header

    def test_rerun_byte_identical(self, tmp_path):
        data_dir = tmp_path / "data"
        out_dir = tmp_path / "out"
        write_fixture_prices(data_dir, n_days=90)
        cfg = write_config(tmp_path / "c.json", data_dir, out_dir)
        assert main(["preprocess", "--config", str(cfg)]) == 0
        first = {p.name: p.read_bytes() for p in out_dir.iterdir()
                 if p.name != "manifest.json"}
        assert main(["preprocess", "--config", str(cfg)]) == 0
        second = {p.name: p.read_bytes() for p in out_dir.iterdir()
                  if p.name != "manifest.json"}
        assert first == second

    def test_too_few_assets_fails(self, tmp_path):
        data_dir = tmp_path / "data"
        data_dir.mkdir()
        (data_dir / "only.csv").write_text("timestamp,price\n2021-01-04,100\n",
                                           encoding="utf-8")
        cfg = write_config(tmp_path / "c.json", data_dir, tmp_path / "out")
        assert main(["preprocess", "--config", str(cfg)]) == 1


class TestFit:
    def test_missing_panel_clean_error(self, tmp_path, capsys):
        data_dir = tmp_path / "data"
        write_fixture_prices(data_dir, n_days=80)
        cfg = write_config(tmp_path / "c.json", data_dir, tmp_path / "out")
        assert main(["fit", "--config", str(cfg)]) == 1
        assert "panel" in capsys.readouterr().err

    def test_model_contents(self, pipeline_run):
        model = json.loads((pipeline_run / "model.json").read_text())
        assert model["assets"] == list(ASSETS)
        for asset in ASSETS:
            entry = model["garch"][asset]
            assert entry["omega"] > 0.0
            assert entry["alpha"] + entry["beta"] < 1.0
            assert entry["sigma_forecast"] > 0.0
        dcc = model["dcc"]
        assert dcc["theta1"] >= 0.0 and dcc["theta2"] >= 0.0
        assert dcc["theta1"] + dcc["theta2"] < 1.0
        assert set(model["copulas"]) == {"gaussian", "student-t", "clayton", "gumbel"}
        resid = np.asarray(model["residuals"])
        assert resid.shape == (model["n_obs"], 3)

    def test_correlation_path_export(self, pipeline_run):
        model = json.loads((pipeline_run / "model.json").read_text())
        rows = read_rows(pipeline_run / "correlation_path.csv")
        assert rows[0] == ["t", "alpha_corp|beta_inc", "alpha_corp|gamma_ltd",
                           "beta_inc|gamma_ltd"]
        assert len(rows) - 1 == model["n_obs"]
        vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        assert np.all(np.abs(vals) <= 1.0)


class TestCompare:
    def test_table5_schema(self, pipeline_run):
        rows = read_rows(pipeline_run / "family_comparison.csv")
        assert rows[0] == ["Copula Family", "Energy Score", "Lower Tail",
                           "Upper Tail", "Pearson Corr", "Spearman Corr",
                           "Kendall's Tau"]
        assert len(rows) == 5
        for row in rows[1:]:
            assert float(row[1]) >= 0.0  # energy nonnegative

    def test_table8_schema_and_ranking(self, pipeline_run):
        rows = read_rows(pipeline_run / "gof_metrics.csv")
        assert rows[0] == ["Copula Family", "AIC", "BIC", "Energy Score"]
        aics = [float(r[1]) for r in rows[1:]]
        assert aics == sorted(aics)

    def test_pairwise_export(self, pipeline_run):
        rows = read_rows(pipeline_run / "pair_correlations.csv")
        assert rows[0] == ["Pair", "Pearson Corr", "Spearman Corr", "Kendall's Tau"]
        assert len(rows) - 1 == 3  # 3 assets -> 3 pairs


class TestRisk:
    def test_table3_schema(self, pipeline_run):
        rows = read_rows(pipeline_run / "risk_metrics.csv")
        assert rows[0] == ["Asset", "VaR (alpha=0.05)", "CVaR (alpha=0.05)"]
        assert [r[0] for r in rows[1:]] == list(ASSETS) + ["High-Corr Portfolio"]
        for row in rows[1:]:
            assert float(row[2]) <= float(row[1])  # CVaR <= VaR

    def test_table4_delta_identity_at_printed_precision(self, pipeline_run):
        rows = read_rows(pipeline_run / "covar_metrics.csv")
        assert rows[0] == ["Asset", "VaR", "CoVaR", "ΔCoVaR"]
        assert rows[-1][0] == "Systemic Impact"
        deltas = []
        for row in rows[1:-1]:
            var, covar, delta = map(float, row[1:])
            assert abs((covar - var) - delta) <= 1e-6 + 1e-12
            deltas.append(delta)
        assert abs(float(rows[-1][3]) - sum(deltas)) <= 1e-6 * len(deltas)

    def test_table7_schema(self, pipeline_run):
        rows = read_rows(pipeline_run / "portfolio_comparison.csv")
        assert rows[0] == ["Asset/Portfolio", "VaR (alpha=0.05)", "CVaR (alpha=0.05)"]
        assert rows[1][0] == "High-Corr Portfolio"

    def test_json_mirror_full_precision(self, pipeline_run):
        payload = json.loads((pipeline_run / "risk_metrics.json").read_text())
        for row in payload["covar"]:
            assert row["delta_covar"] == row["covar"] - row["var"]
        assert payload["systemic_impact"] == pytest.approx(
            sum(r["delta_covar"] for r in payload["covar"]), abs=1e-15)


class TestStress:
    def test_summary_schema(self, pipeline_run):
        rows = read_rows(pipeline_run / "stress_summary.csv")
        assert rows[0] == ["Conditioning Asset", "Systemic Impact (sum ΔCoVaR)"]
        assert [r[0] for r in rows[1:]] == list(ASSETS)

    def test_detail_tables(self, pipeline_run):
        for asset in ASSETS:
            rows = read_rows(pipeline_run / f"stress_{asset}.csv")
            assert rows[0] == ["Asset", "VaR", "CoVaR", "ΔCoVaR"]
            assert len(rows) == 4  # 2 targets + header + footer
            assert rows[-1][0] == "Systemic Impact"


class TestPlotdata:
    def test_density_grids(self, pipeline_run):
        for family in ("gaussian", "student-t", "clayton", "gumbel"):
            rows = read_rows(pipeline_run / f"density_{family}.csv")
            assert rows[0] == ["u", "v", "density"]
            assert len(rows) - 1 == 400  # resolution 20 -> 20*20

    def test_qq_and_hist_files(self, pipeline_run):
        model = json.loads((pipeline_run / "model.json").read_text())
        for asset in ASSETS:
            qq = read_rows(pipeline_run / f"qq_{asset}.csv")
            assert qq[0] == ["quantile_level", "empirical", "theoretical"]
            assert len(qq) - 1 == model["n_obs"]
            hist = read_rows(pipeline_run / f"marginal_hist_{asset}.csv")
            assert hist[0] == ["bin_center", "observed_density", "fitted_density"]

    def test_qq_empirical_column_sorted(self, pipeline_run):
        qq = read_rows(pipeline_run / f"qq_{ASSETS[0]}.csv")
        emp = [float(r[1]) for r in qq[1:]]
        assert emp == sorted(emp)


class TestManifest:
    def test_manifest_covers_all_outputs(self, pipeline_run):
        manifest = json.loads((pipeline_run / "manifest.json").read_text())
        assert set(manifest["commands"]) == {"preprocess", "fit", "compare",
                                             "risk", "stress", "plotdata"}
        listed = {Path(p).name for p in manifest["outputs"]}
        on_disk = {p.name for p in pipeline_run.iterdir()}
        assert listed <= on_disk
        assert "model.json" in listed
        assert manifest["config"]["seed"] == 1234
        assert "copularisk" in manifest["versions"]

    def test_missing_model_is_clean_failure(self, tmp_path, capsys):
        data_dir = tmp_path / "data"
        write_fixture_prices(data_dir, n_days=80)
        cfg = write_config(tmp_path / "c.json", data_dir, tmp_path / "out")
        assert main(["risk", "--config", str(cfg)]) == 1
        assert "model" in capsys.readouterr().err
