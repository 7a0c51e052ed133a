"""Univariate GARCH(1,1) volatility models: fitting by maximum likelihood,
variance filtering, forecasting and simulation.

The conditional mean is a per-asset constant (the sample mean), removed
before variance estimation. Innovations are Gaussian or standardized
Student-t; the ARCH(1) special case is available as a beta = 0 restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special
from scipy.signal import lfilter

from .mathcore import DomainError, RandomStream, minimize

__all__ = [
    "GarchParams",
    "GarchFit",
    "GarchFitError",
    "NU_M_GRID",
    "fit_garch",
    "filter_sigma",
    "standardized_residuals",
    "forecast_sigma",
    "simulate_garch",
    "draw_innovations",
    "innovation_quantile",
    "innovation_pdf",
]

NU_M_GRID = (4.0, 5.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0)

_MIN_OBS = 50


class GarchFitError(RuntimeError):
    """Raised when a variance model cannot be estimated on the given data."""


@dataclass(frozen=True)
class GarchParams:
    """GARCH(1,1) parameters with a constant conditional mean.

    Invariants: omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1; a
    Student-t innovation needs nu > 2 so the standardized variance exists.
    """

    omega: float
    alpha: float
    beta: float
    mu: float = 0.0
    innovation: str = "gaussian"
    nu: Optional[float] = None

    def __post_init__(self):
        if not (self.omega > 0.0):
            raise DomainError("omega must be positive")
        if self.alpha < 0.0 or self.beta < 0.0:
            raise DomainError("alpha and beta must be non-negative")
        if not (self.alpha + self.beta < 1.0):
            raise DomainError("stationarity requires alpha + beta < 1")
        if self.innovation not in ("gaussian", "student-t"):
            raise DomainError(f"unknown innovation family {self.innovation!r}")
        if self.innovation == "student-t" and (self.nu is None or not self.nu > 2.0):
            raise DomainError("student-t innovations require nu > 2")

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.alpha - self.beta)

    def to_dict(self) -> dict:
        out = {
            "omega": self.omega,
            "alpha": self.alpha,
            "beta": self.beta,
            "mu": self.mu,
            "innovation": self.innovation,
        }
        if self.nu is not None:
            out["nu"] = self.nu
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GarchParams":
        return cls(
            omega=float(data["omega"]),
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            mu=float(data.get("mu", 0.0)),
            innovation=data.get("innovation", "gaussian"),
            nu=float(data["nu"]) if data.get("nu") is not None else None,
        )


@dataclass
class GarchFit:
    """Fitted model plus the filtered paths it implies on the data."""

    params: GarchParams
    sigma: np.ndarray
    residuals: np.ndarray
    loglik: float
    converged: bool

    @property
    def residual_variance(self) -> float:
        """Sample variance of the standardized residuals; a sanity check
        that should land near 1 for a converged fit (reported, not
        enforced)."""
        return float(np.var(self.residuals, ddof=1))

    def to_dict(self, include_sigma: bool = False) -> dict:
        out = {
            **self.params.to_dict(),
            "loglik": self.loglik,
            "converged": self.converged,
            "residual_variance": self.residual_variance,
        }
        if include_sigma:
            out["sigma_path"] = self.sigma.tolist()
        return out


def filter_sigma(params: GarchParams, returns) -> np.ndarray:
    """Conditional volatility path implied by ``params`` on ``returns``.

    sigma_1^2 starts at the unconditional variance omega/(1-alpha-beta);
    afterwards sigma_t^2 = omega + alpha*eps_{t-1}^2 + beta*sigma_{t-1}^2.
    """
    r = np.asarray(returns, dtype=float)
    if r.ndim != 1 or r.size < 1:
        raise DomainError("returns must be a non-empty 1-d array")
    eps2 = (r - params.mu) ** 2
    drive = np.empty_like(eps2)
    drive[0] = params.unconditional_variance
    drive[1:] = params.omega + params.alpha * eps2[:-1]
    # sigma2_t = drive_t + beta * sigma2_{t-1} is a linear recursion
    sig2 = lfilter([1.0], [1.0, -params.beta], drive)
    return np.sqrt(sig2)


def standardized_residuals(fit: GarchFit) -> np.ndarray:
    """z_t = (r_t - mu) / sigma_t, already materialized on the fit."""
    return fit.residuals


def _gaussian_loglik(eps: np.ndarray, sig2: np.ndarray) -> float:
    return float(-0.5 * np.sum(np.log(2.0 * np.pi * sig2) + eps * eps / sig2))


def _student_t_loglik(eps: np.ndarray, sig2: np.ndarray, nu: float) -> float:
    z2 = eps * eps / sig2
    const = (
        special.gammaln((nu + 1.0) / 2.0)
        - special.gammaln(nu / 2.0)
        - 0.5 * math.log((nu - 2.0) * math.pi)
    )
    terms = const - 0.5 * np.log(sig2) - (nu + 1.0) / 2.0 * np.log1p(z2 / (nu - 2.0))
    return float(np.sum(terms))


def _loglik(eps: np.ndarray, omega: float, alpha: float, beta: float,
            innovation: str, nu: Optional[float]) -> float:
    drive = np.empty_like(eps)
    drive[0] = omega / (1.0 - alpha - beta)
    drive[1:] = omega + alpha * eps[:-1] ** 2
    sig2 = lfilter([1.0], [1.0, -beta], drive)
    if np.any(sig2 <= 0.0) or not np.all(np.isfinite(sig2)):
        return -np.inf
    if innovation == "gaussian":
        return _gaussian_loglik(eps, sig2)
    return _student_t_loglik(eps, sig2, nu)


def _optimize_variance(
    eps: np.ndarray,
    var0: float,
    innovation: str,
    nu: Optional[float],
    restricted: bool,
    starts,
    tol: float,
    max_evals: int,
):
    """Nelder-Mead over reparameterized coordinates.

    Unrestricted: (omega, s, r) with s = alpha + beta in (0,1) and
    r = alpha / s in (0,1), so the stationarity constraint holds by
    construction. Restricted (ARCH): (omega, alpha). The Student-t case
    appends nu bounded below by 2.
    """
    best = None
    for alpha0, beta0 in starts:
        if restricted:
            x0 = [max(var0 * (1.0 - alpha0), 1e-12), max(alpha0, 1e-4)]
            bounds = [(1e-12, None), (1e-9, 1.0 - 1e-9)]

            def unpack(x):
                return float(x[0]), float(x[1]), 0.0
        else:
            s0 = alpha0 + beta0
            x0 = [max(var0 * (1.0 - s0), 1e-12), s0, alpha0 / s0]
            bounds = [(1e-12, None), (1e-9, 1.0 - 1e-9), (1e-9, 1.0 - 1e-9)]

            def unpack(x):
                return float(x[0]), float(x[1] * x[2]), float(x[1] * (1.0 - x[2]))

        if innovation == "student-t":
            x0 = list(x0) + [nu]
            bounds = list(bounds) + [(2.0 + 1e-6, 500.0)]

        def negloglik(x):
            omega, alpha, beta = unpack(x)
            nu_x = float(x[-1]) if innovation == "student-t" else None
            return -_loglik(eps, omega, alpha, beta, innovation, nu_x)

        res = minimize(negloglik, x0, bounds=bounds, tol=tol, max_evals=max_evals)
        if best is None or res.fun < best[0].fun:
            best = (res, unpack)
    res, unpack = best
    omega, alpha, beta = unpack(res.x)
    nu_hat = float(res.x[-1]) if innovation == "student-t" else None
    return omega, alpha, beta, nu_hat, -res.fun, res.converged


_STARTS = ((0.05, 0.90), (0.10, 0.30))
_ARCH_STARTS = ((0.10, 0.0), (0.30, 0.0))
_BETA_SELECTION_MARGIN = 2.0


def _fit_one(eps: np.ndarray, var0: float, innovation: str, restricted: bool,
             nu_grid, tol: float, max_evals: int):
    starts = _ARCH_STARTS if restricted else _STARTS
    gauss = _optimize_variance(eps, var0, "gaussian", None, restricted,
                               starts, tol, max_evals)
    if innovation == "gaussian":
        return gauss
    # profile nu on the grid at the gaussian pre-fit, then refine jointly
    omega_g, alpha_g, beta_g = gauss[0], gauss[1], gauss[2]
    grid_ll = [
        _loglik(eps, omega_g, alpha_g, beta_g, "student-t", nu) for nu in nu_grid
    ]
    nu0 = float(nu_grid[int(np.argmax(grid_ll))])
    a0 = min(max(alpha_g, 5e-3), 0.6)
    if restricted:
        t_starts = ((a0, 0.0),)
    else:
        b0 = min(max(beta_g, 5e-3), 0.97)
        if a0 + b0 > 0.995:
            shrink = 0.995 / (a0 + b0)
            a0, b0 = a0 * shrink, b0 * shrink
        t_starts = ((a0, b0),)
    return _optimize_variance(eps, var0, "student-t", nu0, restricted,
                              t_starts, tol, max_evals)


def fit_garch(
    returns,
    innovation: str = "student-t",
    restrict_beta_zero: bool = False,
    nu_grid=NU_M_GRID,
    tol: float = 1e-7,
    max_evals: int = 20000,
) -> GarchFit:
    """Maximum-likelihood GARCH(1,1) fit on one return series.

    The mean is fixed at the sample mean before variance estimation. The
    default Student-t innovation profiles nu over ``nu_grid`` and then
    refines it jointly with the variance parameters; pass
    ``innovation="gaussian"`` for the lighter-tailed alternative.
    ``restrict_beta_zero=True`` estimates the nested ARCH(1); the
    unrestricted fit also evaluates that boundary candidate, so the
    restriction can never come out with the larger likelihood.

    Raises
    ------
    GarchFitError
        For series shorter than 50 observations or with zero variance.
    """
    r = np.asarray(returns, dtype=float)
    if r.ndim != 1:
        raise DomainError("returns must be 1-d")
    if r.size < _MIN_OBS:
        raise GarchFitError(f"need at least {_MIN_OBS} observations, got {r.size}")
    if innovation not in ("gaussian", "student-t"):
        raise DomainError(f"unknown innovation family {innovation!r}")
    mu = float(np.mean(r))
    eps = r - mu
    var0 = float(np.var(eps, ddof=1))
    if not var0 > 0.0:
        raise GarchFitError("returns are constant; variance model is degenerate")

    restricted = _fit_one(eps, var0, innovation, True, nu_grid, tol, max_evals)
    if restrict_beta_zero:
        chosen = restricted
    else:
        unrestricted = _fit_one(eps, var0, innovation, False, nu_grid, tol, max_evals)
        # When alpha ~ 0, beta is unidentifiable (any value gives the same
        # flat-variance likelihood), so pure ML wanders on that ridge. The
        # nested beta = 0 point wins unless beta pays its one-parameter
        # AIC-sized rent.
        gain = unrestricted[4] - restricted[4]
        chosen = unrestricted if gain > _BETA_SELECTION_MARGIN else restricted

    omega, alpha, beta, nu_hat, loglik, converged = chosen
    params = GarchParams(omega=omega, alpha=alpha, beta=beta, mu=mu,
                         innovation=innovation, nu=nu_hat)
    sigma = filter_sigma(params, r)
    residuals = (r - mu) / sigma
    return GarchFit(params=params, sigma=sigma, residuals=residuals,
                    loglik=loglik, converged=converged)


def forecast_sigma(fit: GarchFit, horizon: int) -> np.ndarray:
    """Volatility forecasts sigma_{T+1..T+h}.

    One step ahead uses the exact recursion; further steps use the
    mean recursion sigma^2_{T+k} = omega + (alpha+beta) sigma^2_{T+k-1},
    which converges monotonically to the unconditional level.
    """
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    p = fit.params
    eps_last = fit.residuals[-1] * fit.sigma[-1]
    sig2 = np.empty(horizon)
    sig2[0] = p.omega + p.alpha * eps_last ** 2 + p.beta * fit.sigma[-1] ** 2
    for k in range(1, horizon):
        sig2[k] = p.omega + (p.alpha + p.beta) * sig2[k - 1]
    return np.sqrt(sig2)


def draw_innovations(params: GarchParams, size, stream: RandomStream) -> np.ndarray:
    """Unit-variance innovation draws for the configured family."""
    if params.innovation == "gaussian":
        return np.atleast_1d(stream.gaussian(size))
    scale = math.sqrt((params.nu - 2.0) / params.nu)
    return np.atleast_1d(stream.student_t(params.nu, size)) * scale


def innovation_quantile(params: GarchParams, p) -> np.ndarray:
    """Quantile of the fitted unit-variance innovation distribution."""
    from .mathcore import std_normal_quantile, student_t_quantile

    if params.innovation == "gaussian":
        return std_normal_quantile(p)
    scale = math.sqrt((params.nu - 2.0) / params.nu)
    return student_t_quantile(p, params.nu) * scale


def innovation_pdf(params: GarchParams, z) -> np.ndarray:
    """Density of the fitted unit-variance innovation distribution."""
    z = np.asarray(z, dtype=float)
    if params.innovation == "gaussian":
        return np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    nu = params.nu
    const = (
        special.gammaln((nu + 1.0) / 2.0)
        - special.gammaln(nu / 2.0)
        - 0.5 * math.log((nu - 2.0) * math.pi)
    )
    return np.exp(const - (nu + 1.0) / 2.0 * np.log1p(z * z / (nu - 2.0)))


def simulate_garch(
    params: GarchParams, length: int, stream: RandomStream
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simulate (returns, sigma, z) of the exact model recursion.

    Deterministic for a given stream; sigma_1 starts at the unconditional
    level, matching the filter initialization.
    """
    if length < 1:
        raise DomainError("length must be positive")
    z = draw_innovations(params, length, stream)
    sigma = np.empty(length)
    eps = np.empty(length)
    var = params.unconditional_variance
    omega, alpha, beta = params.omega, params.alpha, params.beta
    s2 = var
    for t in range(length):
        if t > 0:
            s2 = omega + alpha * eps[t - 1] ** 2 + beta * s2
        sigma[t] = math.sqrt(s2)
        eps[t] = sigma[t] * z[t]
    return params.mu + eps, sigma, z
