"""Price-file loading, log-return computation, panel alignment and summary
diagnostics.

Input files are one CSV per asset with a header row containing a timestamp
column and a price column. Assets are aligned on common calendar dates by
inner join, so no imputation ever happens; thinly overlapping assets are
dropped against a configurable observation threshold.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

__all__ = [
    "DataError",
    "PriceSeries",
    "ReturnSeries",
    "ReturnPanel",
    "SummaryStats",
    "load_price_series",
    "log_returns",
    "align_panel",
    "summarize",
    "panel_to_csv",
    "panel_from_csv",
]

DEFAULT_MIN_OBS = 50

_PRICE_NAMES = ("price", "close")


class DataError(ValueError):
    """Malformed input data; the message names the offending file/line."""


@dataclass
class PriceSeries:
    """One asset's dated prices, sorted, strictly positive.

    ``duplicates_collapsed`` counts input rows discarded because a later
    row carried the same timestamp (last occurrence wins).
    """

    asset_id: str
    timestamps: List[dt.date]
    prices: np.ndarray
    duplicates_collapsed: int = 0

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass
class ReturnSeries:
    """Daily log returns; timestamps mark the end of each return interval."""

    asset_id: str
    timestamps: List[dt.date]
    returns: np.ndarray

    def __len__(self) -> int:
        return len(self.timestamps)


@dataclass
class ReturnPanel:
    """Time-aligned T x n return matrix with no missing cells."""

    asset_ids: List[str]
    timestamps: List[dt.date]
    returns: np.ndarray
    dropped_assets: List[str] = field(default_factory=list)

    @property
    def n_assets(self) -> int:
        return len(self.asset_ids)

    @property
    def n_obs(self) -> int:
        return len(self.timestamps)


@dataclass
class SummaryStats:
    """Per-asset moments and the pairwise Pearson matrix.

    Correlations involving a zero-variance column are marked undefined
    (NaN) rather than silently propagated; ``undefined_assets`` lists the
    degenerate columns explicitly.
    """

    asset_ids: List[str]
    mean: np.ndarray
    stddev: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray
    correlation: np.ndarray
    undefined_assets: List[str] = field(default_factory=list)


def _detect_columns(frame: pd.DataFrame, path: str) -> Tuple[str, str]:
    """Timestamp column = first column parseable as dates; price column =
    one named price/close, else the first numeric non-timestamp column."""
    ts_col = None
    for col in frame.columns:
        if pd.api.types.is_numeric_dtype(frame[col]):
            continue  # bare numbers are prices, not epoch timestamps
        parsed = pd.to_datetime(frame[col], errors="coerce", format="mixed")
        if parsed.notna().any():
            ts_col = col
            break
    if ts_col is None:
        raise DataError(f"{path}: no column parses as a timestamp")
    price_col = None
    for col in frame.columns:
        if col == ts_col:
            continue
        if str(col).strip().lower() in _PRICE_NAMES:
            price_col = col
            break
    if price_col is None:
        for col in frame.columns:
            if col == ts_col:
                continue
            if pd.to_numeric(frame[col], errors="coerce").notna().any():
                price_col = col
                break
    if price_col is None:
        raise DataError(f"{path}: no numeric price column found")
    return ts_col, price_col


def load_price_series(path, asset_id: Optional[str] = None) -> PriceSeries:
    """Read one asset's (timestamp, price) CSV.

    Rows come back sorted by date with duplicate timestamps collapsed to
    the last occurrence. Unparseable rows and non-positive prices are
    rejected with their 1-based file line number (header = line 1).
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    frame = pd.read_csv(path)
    if frame.empty:
        raise DataError(f"{path}: no data rows")
    ts_col, price_col = _detect_columns(frame, str(path))

    stamps = pd.to_datetime(frame[ts_col], errors="coerce", format="mixed")
    bad = np.where(stamps.isna().to_numpy())[0]
    if bad.size:
        raise DataError(f"{path}:{bad[0] + 2}: unparseable timestamp {frame[ts_col].iloc[bad[0]]!r}")
    prices = pd.to_numeric(frame[price_col], errors="coerce")
    bad = np.where(prices.isna().to_numpy())[0]
    if bad.size:
        raise DataError(f"{path}:{bad[0] + 2}: unparseable price {frame[price_col].iloc[bad[0]]!r}")
    bad = np.where((prices <= 0.0).to_numpy())[0]
    if bad.size:
        raise DataError(f"{path}:{bad[0] + 2}: non-positive price {prices.iloc[bad[0]]!r}")

    table = pd.DataFrame({"date": stamps.dt.date, "price": prices.astype(float)})
    n_before = len(table)
    # stable sort, keep the last occurrence per duplicated date
    table = table.sort_values("date", kind="stable").drop_duplicates("date", keep="last")
    duplicates = n_before - len(table)
    return PriceSeries(
        asset_id=asset_id or path.stem,
        timestamps=list(table["date"]),
        prices=table["price"].to_numpy(),
        duplicates_collapsed=duplicates,
    )


def log_returns(series: PriceSeries) -> ReturnSeries:
    """r_t = ln(P_t / P_{t-1}); one observation shorter than the prices.

    Computed on the price ratio so returns depend only on relative moves
    (a power-of-two rescaling of all prices leaves them bit-identical).
    """
    if len(series) < 2:
        raise DataError(f"{series.asset_id}: need at least 2 prices for returns")
    r = np.log(series.prices[1:] / series.prices[:-1])
    return ReturnSeries(asset_id=series.asset_id,
                        timestamps=series.timestamps[1:],
                        returns=r)


def align_panel(series: Sequence[ReturnSeries],
                min_obs: int = DEFAULT_MIN_OBS) -> ReturnPanel:
    """Inner-join return series on common dates.

    Assets whose overlap with the rest of the panel falls below
    ``min_obs`` are dropped (smallest contributor first) before the final
    join; dropped ids are reported on the panel. Fewer than two surviving
    assets is an error.
    """
    if len(series) < 2:
        raise DataError("alignment requires at least 2 assets")
    frames = {
        s.asset_id: pd.Series(s.returns, index=pd.Index(s.timestamps), name=s.asset_id)
        for s in series
    }
    dropped = [s.asset_id for s in series if len(s) < min_obs]
    active = [s.asset_id for s in series if s.asset_id not in dropped]

    def common_index(ids):
        idx = None
        for aid in ids:
            cur = frames[aid].index
            idx = cur if idx is None else idx.intersection(cur)
        return idx

    while True:
        if len(active) < 2:
            raise DataError("fewer than 2 assets survive alignment")
        idx = common_index(active)
        if len(idx) >= min_obs:
            break
        # drop the asset whose removal grows the intersection the most
        gains = []
        for aid in active:
            others = [a for a in active if a != aid]
            gains.append((len(common_index(others)), aid))
        gains.sort(reverse=True)
        dropped.append(gains[0][1])
        active = [a for a in active if a != gains[0][1]]

    idx = idx.sort_values()
    matrix = np.column_stack([frames[aid].loc[idx].to_numpy() for aid in active])
    return ReturnPanel(asset_ids=active, timestamps=list(idx),
                       returns=matrix, dropped_assets=dropped)


def summarize(panel: ReturnPanel) -> SummaryStats:
    """Sample mean, standard deviation (T-1 denominator), min, max per
    asset, plus the Pearson correlation matrix."""
    x = panel.returns
    if x.size == 0:
        raise DataError("panel is empty")
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1)
    degenerate = np.where(std == 0.0)[0]
    n = x.shape[1]
    corr = np.full((n, n), np.nan)
    ok = np.where(std > 0.0)[0]
    if ok.size:
        sub = np.corrcoef(x[:, ok], rowvar=False)
        sub = np.atleast_2d(sub)
        corr[np.ix_(ok, ok)] = sub
    np.fill_diagonal(corr, 1.0)
    return SummaryStats(
        asset_ids=list(panel.asset_ids),
        mean=mean,
        stddev=std,
        minimum=x.min(axis=0),
        maximum=x.max(axis=0),
        correlation=corr,
        undefined_assets=[panel.asset_ids[i] for i in degenerate],
    )


def panel_to_csv(panel: ReturnPanel, path) -> None:
    """Serialize the panel: timestamp first, one full-precision return
    column per asset."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(["timestamp"] + list(panel.asset_ids)) + "\n")
        for i, ts in enumerate(panel.timestamps):
            cells = [ts.isoformat()] + [repr(float(v)) for v in panel.returns[i]]
            fh.write(",".join(cells) + "\n")


def panel_from_csv(path) -> ReturnPanel:
    frame = pd.read_csv(path, float_precision="round_trip")
    if frame.columns[0] != "timestamp" or frame.shape[1] < 3:
        raise DataError(f"{path}: expected a timestamp column plus >= 2 assets")
    stamps = [d.date() for d in pd.to_datetime(frame["timestamp"])]
    assets = list(frame.columns[1:])
    return ReturnPanel(asset_ids=assets, timestamps=stamps,
                       returns=frame[assets].to_numpy(dtype=float))
