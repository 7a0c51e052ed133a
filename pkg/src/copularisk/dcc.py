"""DCC(1,1) correlation dynamics on panels of standardized residuals.

Estimation is two-stage: univariate GARCH models produce the residual
panel first, then the correlation parameters (theta1, theta2) maximize the
Gaussian quasi-likelihood with the unconditional matrix held at its sample
estimate (correlation targeting).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.signal import lfilter

from .garch import GarchParams, draw_innovations
from .mathcore import DomainError, RandomStream, cholesky, minimize, repair_correlation

__all__ = [
    "DccParams",
    "DccFit",
    "DccFitError",
    "fit_dcc",
    "q_recursion",
    "covariance_at",
    "forecast_correlation",
    "simulate_dcc",
    "export_r_path",
]


class DccFitError(RuntimeError):
    """Raised when the correlation dynamics cannot be estimated."""


@dataclass(frozen=True)
class DccParams:
    """Dynamics (theta1, theta2) plus the unconditional matrix Q-bar.

    Stationarity requires theta1 + theta2 < 1 with both non-negative.
    """

    theta1: float
    theta2: float
    q_bar: np.ndarray

    def __post_init__(self):
        if self.theta1 < 0.0 or self.theta2 < 0.0:
            raise DomainError("theta1 and theta2 must be non-negative")
        if not (self.theta1 + self.theta2 < 1.0):
            raise DomainError("stationarity requires theta1 + theta2 < 1")
        q = np.asarray(self.q_bar, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DomainError("q_bar must be square")
        if not np.allclose(q, q.T, atol=1e-8):
            raise DomainError("q_bar must be symmetric")
        object.__setattr__(self, "q_bar", 0.5 * (q + q.T))

    @property
    def dim(self) -> int:
        return self.q_bar.shape[0]

    def to_dict(self) -> dict:
        return {"theta1": self.theta1, "theta2": self.theta2,
                "q_bar": self.q_bar.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "DccParams":
        return cls(theta1=float(data["theta1"]), theta2=float(data["theta2"]),
                   q_bar=np.asarray(data["q_bar"], dtype=float))


@dataclass
class DccFit:
    params: DccParams
    r_path: np.ndarray  # (T, n, n) correlation matrices
    loglik: float
    converged: bool
    q_last: Optional[np.ndarray] = None


def _normalize_to_correlation(q: np.ndarray) -> np.ndarray:
    """R = diag(Q)^{-1/2} Q diag(Q)^{-1/2} with an exactly unit diagonal,
    applied over a (T, n, n) stack."""
    d = np.sqrt(np.einsum("tii->ti", q))
    r = q / (d[:, :, None] * d[:, None, :])
    idx = np.arange(q.shape[1])
    r[:, idx, idx] = 1.0
    return r


def q_recursion(params: DccParams, residuals) -> Tuple[np.ndarray, np.ndarray]:
    """Exact Q_t / R_t paths on the residual panel.

    Q_1 = Q-bar, then Q_t = (1 - t1 - t2) Q-bar + t1 z_{t-1} z_{t-1}' +
    t2 Q_{t-1}; each R_t is the correlation normalization of Q_t.
    """
    z = np.asarray(residuals, dtype=float)
    if z.ndim != 2:
        raise DomainError("residual panel must be T x n")
    t_len, n = z.shape
    if n != params.dim:
        raise DomainError("panel width must match q_bar")
    outer = z[:, :, None] * z[:, None, :]
    drive = np.empty((t_len, n, n))
    drive[0] = params.q_bar
    drive[1:] = ((1.0 - params.theta1 - params.theta2) * params.q_bar[None, :, :]
                 + params.theta1 * outer[:-1])
    flat = drive.reshape(t_len, n * n)
    q_flat = lfilter([1.0], [1.0, -params.theta2], flat, axis=0)
    q = q_flat.reshape(t_len, n, n)
    return q, _normalize_to_correlation(q)


def _dcc_quasi_loglik(r_path: np.ndarray, z: np.ndarray) -> float:
    """Gaussian quasi-likelihood of the correlation stage:
    -0.5 * sum_t [log|R_t| + z_t' R_t^{-1} z_t - z_t' z_t]."""
    try:
        low = np.linalg.cholesky(r_path)
    except np.linalg.LinAlgError:
        return -np.inf
    logdet = 2.0 * np.sum(np.log(np.einsum("tii->ti", low)), axis=1)
    w = np.linalg.solve(low, z[:, :, None])[:, :, 0]
    quad = np.sum(w * w, axis=1)
    zz = np.sum(z * z, axis=1)
    return float(-0.5 * np.sum(logdet + quad - zz))


def fit_dcc(residuals, tol: float = 1e-7, max_evals: int = 20000) -> DccFit:
    """Estimate (theta1, theta2) on a T x n standardized-residual panel.

    Q-bar is fixed at the unit-diagonal-normalized sample second moment
    (correlation targeting), leaving a two-parameter maximization over the
    constrained simplex, run in (s, r) coordinates with s = t1 + t2 and
    r = t1 / s so the constraints hold by construction.
    """
    z = np.asarray(residuals, dtype=float)
    if z.ndim != 2 or z.shape[1] < 2:
        raise DomainError("fit_dcc requires a T x n panel with n >= 2")
    t_len, n = z.shape
    if t_len < 50:
        raise DccFitError(f"need at least 50 observations, got {t_len}")
    if np.any(np.std(z, axis=0) == 0.0):
        raise DccFitError("a residual column is constant; correlation undefined")

    m = z.T @ z / t_len
    d = np.sqrt(np.diag(m))
    q_bar, _ = repair_correlation(m / np.outer(d, d))

    def negloglik(x: np.ndarray) -> float:
        s, ratio = float(x[0]), float(x[1])
        params = DccParams(theta1=s * ratio, theta2=s * (1.0 - ratio), q_bar=q_bar)
        _, r_path = q_recursion(params, z)
        return -_dcc_quasi_loglik(r_path, z)

    best = None
    for t1, t2 in ((0.02, 0.95), (0.05, 0.85)):
        s0 = t1 + t2
        res = minimize(negloglik, [s0, t1 / s0],
                       bounds=[(1e-9, 1.0 - 1e-9), (1e-9, 1.0 - 1e-9)],
                       tol=tol, max_evals=max_evals)
        if best is None or res.fun < best.fun:
            best = res
    s, ratio = float(best.x[0]), float(best.x[1])
    params = DccParams(theta1=s * ratio, theta2=s * (1.0 - ratio), q_bar=q_bar)
    q, r_path = q_recursion(params, z)
    return DccFit(params=params, r_path=r_path, loglik=-best.fun,
                  converged=best.converged, q_last=q[-1])


def export_r_path(fit: DccFit, path, asset_ids: Optional[Sequence[str]] = None) -> None:
    """Write the correlation path to CSV: one row per t, upper triangle
    flattened column-major by pair."""
    n = fit.params.dim
    if asset_ids is None:
        asset_ids = [f"x{j + 1}" for j in range(n)]
    iu = np.triu_indices(n, 1)
    header = ["t"] + [f"{asset_ids[i]}|{asset_ids[j]}" for i, j in zip(*iu)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for t in range(fit.r_path.shape[0]):
            cells = [str(t + 1)] + [repr(float(v)) for v in fit.r_path[t][iu]]
            fh.write(",".join(cells) + "\n")


def covariance_at(fit: DccFit, sigmas, t: int) -> np.ndarray:
    """H_t = D_t R_t D_t for the diagonal volatility entries ``sigmas``."""
    s = np.asarray(sigmas, dtype=float)
    n = fit.params.dim
    if s.shape != (n,):
        raise DomainError("volatility vector length must match the fit dimension")
    if not 0 <= t < fit.r_path.shape[0]:
        raise DomainError("time index out of range")
    return fit.r_path[t] * np.outer(s, s)


def forecast_correlation(params: DccParams, q_last: np.ndarray,
                         z_last: np.ndarray) -> np.ndarray:
    """One-step-ahead R_{T+1} from the last Q and residual vector."""
    q_next = ((1.0 - params.theta1 - params.theta2) * params.q_bar
              + params.theta1 * np.outer(z_last, z_last)
              + params.theta2 * q_last)
    return _normalize_to_correlation(q_next[None, :, :])[0]


def simulate_dcc(
    params: DccParams,
    marginals: Sequence[GarchParams],
    length: int,
    stream: RandomStream,
) -> np.ndarray:
    """Simulate a synthetic return panel from the full DCC-GARCH recursion.

    Residuals are drawn as z_t = chol(R_t) eta_t with eta i.i.d. from each
    margin's innovation family, then scaled by per-asset GARCH volatility.
    Deterministic for a given stream.
    """
    n = params.dim
    if len(marginals) != n:
        raise DomainError("need one marginal parameter set per asset")
    if length < 1:
        raise DomainError("length must be positive")
    eta = np.column_stack([
        draw_innovations(m, length, stream) for m in marginals
    ])
    omega = np.array([m.omega for m in marginals])
    alpha = np.array([m.alpha for m in marginals])
    beta = np.array([m.beta for m in marginals])
    mu = np.array([m.mu for m in marginals])

    returns = np.empty((length, n))
    q = params.q_bar.copy()
    sig2 = omega / (1.0 - alpha - beta)
    z_prev = None
    eps_prev = None
    for t in range(length):
        if t > 0:
            q = ((1.0 - params.theta1 - params.theta2) * params.q_bar
                 + params.theta1 * np.outer(z_prev, z_prev)
                 + params.theta2 * q)
            sig2 = omega + alpha * eps_prev ** 2 + beta * sig2
        d = np.sqrt(np.diag(q))
        r = q / np.outer(d, d)
        np.fill_diagonal(r, 1.0)
        z = cholesky(r) @ eta[t]
        eps = np.sqrt(sig2) * z
        returns[t] = mu + eps
        z_prev, eps_prev = z, eps
    return returns
