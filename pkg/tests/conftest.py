import datetime as dt
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


ASSETS = ("alpha_corp", "beta_inc", "gamma_ltd")


def write_fixture_prices(data_dir: Path, n_days: int = 420, seed: int = 314,
                         short_asset: bool = False) -> None:
    """Correlated geometric random-walk prices, one CSV per asset."""
    data_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    corr = np.array([[1.0, 0.6, 0.3],
                     [0.6, 1.0, 0.4],
                     [0.3, 0.4, 1.0]])
    low = np.linalg.cholesky(corr)
    shocks = rng.standard_normal((n_days, 3)) @ low.T
    vols = np.array([0.012, 0.017, 0.022])
    rets = 0.0003 + shocks * vols * (1.0 + 0.5 * np.abs(shocks))  # mild clustering
    start = dt.date(2021, 1, 4)
    dates = []
    d = start
    while len(dates) < n_days:
        if d.weekday() < 5:
            dates.append(d)
        d += dt.timedelta(days=1)
    for j, asset in enumerate(ASSETS):
        prices = 100.0 * np.exp(np.cumsum(rets[:, j]))
        lines = ["timestamp,price"]
        lines += [f"{dates[i].isoformat()},{prices[i]:.6f}" for i in range(n_days)]
        (data_dir / f"{asset}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if short_asset:
        lines = ["timestamp,price"]
        lines += [f"{dates[i].isoformat()},{100 + i:.2f}" for i in range(12)]
        (data_dir / "tiny_co.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_config(path: Path, data_dir: Path, out_dir: Path, **overrides) -> Path:
    config = {
        "data_dir": str(data_dir),
        "out_dir": str(out_dir),
        "alpha": 0.05,
        "scenarios": 20_000,
        "seed": 1234,
        "grid_resolution": 20,
        "min_obs": 50,
    }
    config.update(overrides)
    path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory):
    """One full CLI pipeline run shared by the read-only schema tests."""
    from copularisk.cli import main

    root = tmp_path_factory.mktemp("pipeline")
    data_dir = root / "data"
    out_dir = root / "out"
    write_fixture_prices(data_dir)
    config = write_config(root / "config.json", data_dir, out_dir)
    code = main(["all", "--config", str(config)])
    assert code in (0, 3)
    return out_dir
