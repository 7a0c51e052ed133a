"""Parametric copula families (Gaussian, Student-t, Clayton, Gumbel):
density and CDF evaluation, pseudo-likelihood fitting on rank-transformed
data, sampling, tail-dependence coefficients, and the empirical copula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import special, stats
from scipy.stats import qmc

from .mathcore import (
    DomainError,
    CholeskyError,
    RandomStream,
    cholesky,
    minimize,
    repair_correlation,
    std_normal_cdf,
    std_normal_quantile,
    student_t_cdf,
    student_t_quantile,
    validate_correlation,
)

__all__ = [
    "FAMILIES",
    "CopulaSpec",
    "CopulaFit",
    "TailDependence",
    "UnsupportedDimensionError",
    "pseudo_observations",
    "copula_density",
    "copula_log_density",
    "copula_cdf",
    "sample_copula",
    "fit_copula",
    "tail_dependence",
    "tail_dependence_pairs",
    "empirical_copula",
    "density_grid",
]

FAMILIES = ("gaussian", "student-t", "clayton", "gumbel")

NU_GRID = (3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0)

# Seed for the internal QMC integrator so copula_cdf is a pure function.
_CDF_QMC_SEED = 20170

_TINY = 1e-300


class UnsupportedDimensionError(ValueError):
    """Raised for operations without a tractable form in this dimension."""


@dataclass(eq=False)
class CopulaSpec:
    """A fully parameterized copula.

    Parameters
    ----------
    family : str
        One of ``gaussian``, ``student-t``, ``clayton``, ``gumbel``.
    dim : int
        Number of margins, at least 2.
    sigma : ndarray, optional
        Correlation matrix (elliptical families).
    nu : float, optional
        Degrees of freedom, > 2 (student-t only).
    theta : float, optional
        Archimedean parameter; Clayton needs theta > 0, Gumbel theta >= 1.
    """

    family: str
    dim: int
    sigma: Optional[np.ndarray] = None
    nu: Optional[float] = None
    theta: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown copula family {self.family!r}")
        self.dim = int(self.dim)
        if self.dim < 2:
            raise DomainError("copula dimension must be at least 2")
        if self.family in ("gaussian", "student-t"):
            if self.sigma is None:
                raise DomainError(f"{self.family} copula requires a correlation matrix")
            self.sigma = validate_correlation(self.sigma, repair=True)
            if self.sigma.shape[0] != self.dim:
                raise DomainError("correlation matrix size must match dim")
            if self.family == "student-t":
                if self.nu is None or not self.nu > 2.0:
                    raise DomainError("student-t copula requires nu > 2")
                self.nu = float(self.nu)
        else:
            if self.theta is None:
                raise DomainError(f"{self.family} copula requires theta")
            self.theta = float(self.theta)
            if self.family == "clayton" and not self.theta > 0.0:
                raise DomainError("clayton requires theta > 0")
            if self.family == "gumbel" and not self.theta >= 1.0:
                raise DomainError("gumbel requires theta >= 1")

    @property
    def is_elliptical(self) -> bool:
        return self.family in ("gaussian", "student-t")

    def parameter_count(self) -> int:
        """Free parameters: n(n-1)/2 for Gaussian, +1 for Student-t, 1 for
        the Archimedean families."""
        if self.family == "gaussian":
            return self.dim * (self.dim - 1) // 2
        if self.family == "student-t":
            return self.dim * (self.dim - 1) // 2 + 1
        return 1

    def to_dict(self) -> dict:
        out = {"family": self.family, "dim": self.dim}
        if self.sigma is not None:
            out["sigma"] = np.asarray(self.sigma).tolist()
        if self.nu is not None:
            out["nu"] = self.nu
        if self.theta is not None:
            out["theta"] = self.theta
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CopulaSpec":
        return cls(
            family=data["family"],
            dim=int(data["dim"]),
            sigma=np.asarray(data["sigma"], dtype=float) if "sigma" in data else None,
            nu=data.get("nu"),
            theta=data.get("theta"),
        )


@dataclass
class CopulaFit:
    """Result of :func:`fit_copula`.

    ``composite`` marks a Gumbel fit above two dimensions, where the
    log-likelihood is the sum of bivariate pair terms rather than a joint
    density (the n-dimensional Gumbel density has no tractable form).
    """

    spec: CopulaSpec
    loglik: float
    converged: bool
    composite: bool = False


@dataclass(frozen=True)
class TailDependence:
    lower: float
    upper: float


# ---------------------------------------------------------------------------
# pseudo-observations and the empirical copula
# ---------------------------------------------------------------------------

def pseudo_observations(panel) -> np.ndarray:
    """Rank-transform each column to ``rank / (k + 1)``.

    Ties receive average ranks, so tied sums are preserved; every entry is
    strictly inside (0, 1).
    """
    x = np.asarray(panel, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    k = x.shape[0]
    if k < 2:
        raise DomainError("pseudo_observations requires at least 2 rows")
    u = np.empty_like(x)
    for j in range(x.shape[1]):
        u[:, j] = stats.rankdata(x[:, j], method="average") / (k + 1.0)
    return u


def empirical_copula(u_matrix, point) -> float:
    """Multivariate rank ECDF: the indicator average of rows <= ``point``."""
    u = np.asarray(u_matrix, dtype=float)
    q = np.asarray(point, dtype=float)
    if u.ndim != 2 or q.shape != (u.shape[1],):
        raise DomainError("query point dimension must match the sample")
    return float(np.mean(np.all(u <= q[None, :], axis=1)))


# ---------------------------------------------------------------------------
# log densities
# ---------------------------------------------------------------------------

def _elliptical_gaussian_terms(z: np.ndarray, low: np.ndarray) -> np.ndarray:
    from scipy.linalg import solve_triangular

    w = solve_triangular(low, z.T, lower=True).T
    quad = np.sum(w * w, axis=1) - np.sum(z * z, axis=1)
    logdet = 2.0 * np.sum(np.log(np.diag(low)))
    return -0.5 * (logdet + quad)


def _student_t_terms(x: np.ndarray, sigma: np.ndarray, nu: float) -> np.ndarray:
    """t copula log density given already-transformed scores x = t_nu^{-1}(u)."""
    from scipy.linalg import solve_triangular

    n = x.shape[1]
    low = cholesky(sigma)
    w = solve_triangular(low, x.T, lower=True).T
    quad = np.sum(w * w, axis=1)
    logdet = 2.0 * np.sum(np.log(np.diag(low)))
    const = (
        special.gammaln((nu + n) / 2.0)
        + (n - 1.0) * special.gammaln(nu / 2.0)
        - n * special.gammaln((nu + 1.0) / 2.0)
    )
    return (
        const
        - 0.5 * logdet
        - (nu + n) / 2.0 * np.log1p(quad / nu)
        + (nu + 1.0) / 2.0 * np.sum(np.log1p(x * x / nu), axis=1)
    )


def _student_t_log_density(u: np.ndarray, sigma: np.ndarray, nu: float) -> np.ndarray:
    return _student_t_terms(student_t_quantile(u, nu), sigma, nu)


def _clayton_log_density(u: np.ndarray, theta: float) -> np.ndarray:
    n = u.shape[1]
    j = np.arange(1, n + 1)
    coeff = np.sum(np.log((j - 1) * theta + 1.0))
    t = np.sum(u ** (-theta), axis=1) - n + 1.0
    t = np.maximum(t, _TINY)
    return coeff - (theta + 1.0) * np.sum(np.log(u), axis=1) - (1.0 / theta + n) * np.log(t)


def _gumbel_log_density_2d(u: np.ndarray, theta: float) -> np.ndarray:
    x = -np.log(u[:, 0])
    y = -np.log(u[:, 1])
    s = x ** theta + y ** theta
    a = s ** (1.0 / theta)
    return (
        -a
        + (theta - 1.0) * (np.log(x) + np.log(y))
        + (x + y)
        + (1.0 / theta - 2.0) * np.log(s)
        + np.log(a + theta - 1.0)
    )


def copula_log_density(spec: CopulaSpec, u_matrix) -> np.ndarray:
    """Vectorized log copula density over the rows of ``u_matrix``.

    Rows must lie strictly inside the unit hypercube. The Gumbel density
    is only available bivariately.
    """
    u = np.asarray(u_matrix, dtype=float)
    if u.ndim == 1:
        u = u[None, :]
    if u.shape[1] != spec.dim:
        raise DomainError("point dimension must match the copula dimension")
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("density requires points strictly inside (0,1)^n")
    if spec.family == "gaussian":
        z = std_normal_quantile(u)
        return _elliptical_gaussian_terms(z, cholesky(spec.sigma))
    if spec.family == "student-t":
        return _student_t_log_density(u, spec.sigma, spec.nu)
    if spec.family == "clayton":
        return _clayton_log_density(u, spec.theta)
    if spec.dim != 2:
        raise UnsupportedDimensionError(
            "the gumbel density is implemented bivariately; use pairwise analysis"
        )
    return _gumbel_log_density_2d(u, spec.theta)


def copula_density(spec: CopulaSpec, point) -> float:
    """Copula density at a single interior point."""
    return float(np.exp(copula_log_density(spec, np.asarray(point, dtype=float))[0]))


# ---------------------------------------------------------------------------
# CDFs
# ---------------------------------------------------------------------------

def _archimedean_cdf(spec: CopulaSpec, u: np.ndarray) -> float:
    if np.any(u <= 0.0):
        return 0.0
    if spec.family == "clayton":
        t = np.sum(u ** (-spec.theta)) - spec.dim + 1.0
        return float(min(1.0, t ** (-1.0 / spec.theta)))
    s = np.sum((-np.log(u)) ** spec.theta)
    return float(min(1.0, math.exp(-s ** (1.0 / spec.theta))))


def _genz_qmc_cdf(
    upper: np.ndarray,
    sigma: np.ndarray,
    nu: Optional[float],
    n_points: int = 4096,
    replicates: int = 8,
    seed: int = _CDF_QMC_SEED,
) -> Tuple[float, float]:
    """Quasi-Monte-Carlo joint CDF for the normal / Student-t with upper
    limits ``upper`` (lower limits -inf), via sequential conditioning on
    the Cholesky factor. Returns (estimate, standard error) from
    independently scrambled Sobol replicates.
    """
    low = cholesky(sigma)
    d = len(upper)
    qmc_dim = d if nu is None else d + 1
    estimates = []
    for rep in range(replicates):
        sob = qmc.Sobol(max(qmc_dim - 1, 1), scramble=True, seed=seed + rep)
        w = sob.random(n_points)
        if nu is not None:
            # t_nu(x <= b) = E_S[ Phi_Sigma(b * sqrt(S / nu)) ], S ~ chi2_nu
            chi2 = 2.0 * special.gammaincinv(nu / 2.0, np.clip(w[:, 0], 1e-15, 1 - 1e-15))
            scale = np.sqrt(chi2 / nu)
            w = w[:, 1:]
        else:
            scale = np.ones(n_points)
        b = upper[None, :] * scale[:, None]
        prob = np.clip(std_normal_cdf(b[:, 0] / low[0, 0]), 0.0, 1.0)
        y = np.zeros((n_points, d))
        e_prev = prob.copy()
        for i in range(1, d):
            frac = np.clip(w[:, i - 1] * e_prev, 1e-15, 1.0 - 1e-15)
            y[:, i - 1] = std_normal_quantile(frac)
            num = b[:, i] - y[:, :i] @ low[i, :i]
            e_prev = np.clip(std_normal_cdf(num / low[i, i]), 0.0, 1.0)
            prob *= e_prev
        estimates.append(float(np.mean(prob)))
    value = float(np.mean(estimates))
    se = float(np.std(estimates, ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return min(max(value, 0.0), 1.0), se


def copula_cdf(spec: CopulaSpec, point, return_se: bool = False):
    """Copula CDF at ``point`` in the closed unit hypercube.

    Clayton and Gumbel use their closed forms. The elliptical families are
    integrated by randomized quasi-Monte-Carlo (practical up to n ~ 8);
    with ``return_se=True`` the integration standard error is returned as
    a second value (0.0 for closed forms).
    """
    u = np.asarray(point, dtype=float)
    if u.shape != (spec.dim,):
        raise DomainError("point dimension must match the copula dimension")
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise DomainError("copula_cdf requires a point in [0,1]^n")

    if np.any(u == 0.0):
        return (0.0, 0.0) if return_se else 0.0
    if np.all(u == 1.0):
        return (1.0, 0.0) if return_se else 1.0

    if not spec.is_elliptical:
        value = _archimedean_cdf(spec, u)
        return (value, 0.0) if return_se else value

    # Margins at exactly 1 integrate out: drop them and use the submatrix.
    active = u < 1.0
    idx = np.where(active)[0]
    if len(idx) == 1:
        value = float(u[idx[0]])
        return (value, 0.0) if return_se else value
    sub = spec.sigma[np.ix_(idx, idx)]
    if spec.family == "gaussian":
        upper = std_normal_quantile(u[idx])
        value, se = _genz_qmc_cdf(upper, sub, nu=None)
    else:
        upper = student_t_quantile(u[idx], spec.nu)
        value, se = _genz_qmc_cdf(upper, sub, nu=spec.nu)
    return (value, se) if return_se else value


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _clip_unit(u: np.ndarray) -> np.ndarray:
    return np.clip(u, _TINY, np.nextafter(1.0, 0.0))


def sample_copula(spec: CopulaSpec, k: int, stream: RandomStream) -> np.ndarray:
    """Draw ``k`` rows from the copula; uniform margins by construction.

    Elliptical families go through the Cholesky factor of the correlation
    matrix; Clayton uses a gamma frailty and Gumbel a positive-stable
    frailty (Marshall-Olkin construction).
    """
    k = int(k)
    if k < 1:
        raise DomainError("sample size must be positive")
    n = spec.dim
    if spec.family == "gaussian":
        z = stream.gaussian((k, n)) @ cholesky(spec.sigma).T
        return _clip_unit(std_normal_cdf(z))
    if spec.family == "student-t":
        z = stream.gaussian((k, n)) @ cholesky(spec.sigma).T
        chi2 = 2.0 * stream.gamma(spec.nu / 2.0, k)
        x = z / np.sqrt(chi2 / spec.nu)[:, None]
        return _clip_unit(student_t_cdf(x, spec.nu))
    if spec.family == "clayton":
        v = stream.gamma(1.0 / spec.theta, k)
        v = np.maximum(v, _TINY)
        e = stream.exponential((k, n))
        return _clip_unit((1.0 + e / v[:, None]) ** (-1.0 / spec.theta))
    # gumbel
    if spec.theta == 1.0:
        return _clip_unit(stream.uniform((k, n)))
    v = stream.positive_stable(1.0 / spec.theta, k)
    v = np.maximum(v, _TINY)
    e = stream.exponential((k, n))
    return _clip_unit(np.exp(-((e / v[:, None]) ** (1.0 / spec.theta))))


# ---------------------------------------------------------------------------
# tail dependence
# ---------------------------------------------------------------------------

def _t_tail_lambda(rho: float, nu: float) -> float:
    arg = -math.sqrt((nu + 1.0) * (1.0 - rho) / (1.0 + rho))
    return 2.0 * float(student_t_cdf(arg, nu + 1.0))


def tail_dependence_pairs(spec: CopulaSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Pairwise (lower, upper) tail-dependence matrices."""
    n = spec.dim
    lam_l = np.zeros((n, n))
    lam_u = np.zeros((n, n))
    if spec.family == "clayton":
        lam_l[:] = 2.0 ** (-1.0 / spec.theta)
    elif spec.family == "gumbel":
        lam_u[:] = 2.0 - 2.0 ** (1.0 / spec.theta)
    elif spec.family == "student-t":
        for i in range(n):
            for j in range(n):
                if i != j:
                    lam = _t_tail_lambda(float(spec.sigma[i, j]), spec.nu)
                    lam_l[i, j] = lam_u[i, j] = lam
    np.fill_diagonal(lam_l, 1.0)
    np.fill_diagonal(lam_u, 1.0)
    if spec.family == "gaussian":
        # zero off-diagonal: no asymptotic tail dependence for |rho| < 1
        pass
    return lam_l, lam_u


def tail_dependence(spec: CopulaSpec) -> TailDependence:
    """Tail-dependence coefficients.

    Clayton: lambda_L = 2**(-1/theta); Gumbel: lambda_U = 2 - 2**(1/theta);
    Gaussian: (0, 0); Student-t uses the symmetric closed form per pair.
    Above two dimensions the elliptical values are averaged over pairs.
    """
    if spec.family == "clayton":
        return TailDependence(2.0 ** (-1.0 / spec.theta), 0.0)
    if spec.family == "gumbel":
        return TailDependence(0.0, 2.0 - 2.0 ** (1.0 / spec.theta))
    if spec.family == "gaussian":
        return TailDependence(0.0, 0.0)
    lam_l, _ = tail_dependence_pairs(spec)
    off = lam_l[~np.eye(spec.dim, dtype=bool)]
    lam = float(np.mean(off))
    return TailDependence(lam, lam)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _pairwise_kendall(u: np.ndarray) -> np.ndarray:
    n = u.shape[1]
    tau = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            t = stats.kendalltau(u[:, i], u[:, j]).statistic
            tau[i, j] = tau[j, i] = t
    return tau


def _offdiag_to_corr(values: np.ndarray, n: int) -> np.ndarray:
    sigma = np.eye(n)
    iu = np.triu_indices(n, 1)
    sigma[iu] = values
    sigma[(iu[1], iu[0])] = values
    return sigma


def _polish_corr_given_scores(scores, kernel, sigma0, tol: float, max_evals: int):
    """Maximize a pseudo-likelihood over the off-diagonal correlation
    entries, with the margin transform already applied (``scores`` fixed).
    Non-PSD proposals are penalized; the result is PSD-repaired."""
    n = scores.shape[1]
    iu = np.triu_indices(n, 1)
    x0 = np.asarray(sigma0[iu], dtype=float)
    bounds = [(-1.0 + 1e-9, 1.0 - 1e-9)] * len(x0)

    def negloglik(v: np.ndarray) -> float:
        sigma = _offdiag_to_corr(v, n)
        try:
            return -float(np.sum(kernel(scores, sigma)))
        except CholeskyError:
            return np.inf

    res = minimize(negloglik, x0, bounds=bounds, tol=tol, max_evals=max_evals)
    sigma, _ = repair_correlation(_offdiag_to_corr(res.x, n))
    return sigma, -res.fun, res.converged


def _fit_gaussian(u: np.ndarray, tol: float, max_evals: int) -> CopulaFit:
    z = std_normal_quantile(u)
    with np.errstate(invalid="ignore", divide="ignore"):
        scores_corr = np.corrcoef(z, rowvar=False)
    if not np.all(np.isfinite(scores_corr)):
        raise DomainError("degenerate column; normal-scores correlation undefined")
    sigma0, _ = repair_correlation(scores_corr)
    sigma, loglik, converged = _polish_corr_given_scores(
        z, lambda zs, s: _elliptical_gaussian_terms(zs, cholesky(s)),
        sigma0, tol, max_evals)
    return CopulaFit(CopulaSpec("gaussian", u.shape[1], sigma=sigma), loglik, converged)


def _fit_student_t(u: np.ndarray, tol: float, max_evals: int) -> CopulaFit:
    from scipy.optimize import minimize_scalar

    tau = _pairwise_kendall(u)
    sigma0, _ = repair_correlation(np.sin(np.pi * tau / 2.0))

    def loglik_at(nu: float, sigma: np.ndarray) -> float:
        return float(np.sum(_student_t_terms(student_t_quantile(u, nu), sigma, nu)))

    # profile nu on the grid at the tau-sine start, then refine locally
    grid_ll = [loglik_at(nu, sigma0) for nu in NU_GRID]
    best = int(np.argmax(grid_ll))
    nu_hat, ll_best = NU_GRID[best], grid_ll[best]
    lo = NU_GRID[max(best - 1, 0)]
    hi = NU_GRID[min(best + 1, len(NU_GRID) - 1)]
    if hi > lo:
        ref = minimize_scalar(
            lambda s: -loglik_at(2.0 + math.exp(s), sigma0),
            bounds=(math.log(lo - 2.0), math.log(hi - 2.0)),
            method="bounded",
            options={"xatol": 1e-3},
        )
        if -ref.fun > ll_best:
            nu_hat, ll_best = 2.0 + math.exp(float(ref.x)), -float(ref.fun)

    # polish the correlation with the transform cached at nu_hat
    scores = student_t_quantile(u, nu_hat)
    nu_fixed = nu_hat
    sigma, loglik, converged = _polish_corr_given_scores(
        scores, lambda xs, s: _student_t_terms(xs, s, nu_fixed),
        sigma0, tol, max_evals)
    loglik = max(loglik, ll_best)

    # one more nu pass at the polished correlation
    ref2 = minimize_scalar(
        lambda s: -loglik_at(2.0 + math.exp(s), sigma),
        bounds=(math.log(max(0.4 * nu_hat, 2.1) - 2.0),
                math.log(min(2.5 * nu_hat, 500.0) - 2.0)),
        method="bounded",
        options={"xatol": 1e-3},
    )
    if -ref2.fun > loglik:
        nu_hat, loglik = 2.0 + math.exp(float(ref2.x)), -float(ref2.fun)
    spec = CopulaSpec("student-t", u.shape[1], sigma=sigma, nu=nu_hat)
    return CopulaFit(spec, loglik, converged)


def _mean_offdiag_kendall(u: np.ndarray) -> float:
    tau = _pairwise_kendall(u)
    n = u.shape[1]
    return float(np.mean(tau[np.triu_indices(n, 1)]))


def _fit_clayton(u: np.ndarray, tol: float, max_evals: int) -> CopulaFit:
    tau = _mean_offdiag_kendall(u)
    tau = min(max(tau, 1e-3), 0.98)
    theta0 = max(2.0 * tau / (1.0 - tau), 0.02)

    def negloglik(x: np.ndarray) -> float:
        return -float(np.sum(_clayton_log_density(u, float(x[0]))))

    res = minimize(negloglik, [theta0], bounds=[(1e-8, 200.0)], tol=tol, max_evals=max_evals)
    spec = CopulaSpec("clayton", u.shape[1], theta=float(res.x[0]))
    return CopulaFit(spec, -res.fun, res.converged)


def _gumbel_pairwise_loglik(u: np.ndarray, theta: float) -> float:
    n = u.shape[1]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += float(np.sum(_gumbel_log_density_2d(u[:, [i, j]], theta)))
    return total


def _fit_gumbel(u: np.ndarray, tol: float, max_evals: int) -> CopulaFit:
    n = u.shape[1]
    tau = _mean_offdiag_kendall(u)
    tau = min(max(tau, 1e-6), 0.98)
    theta0 = max(1.0 / (1.0 - tau), 1.0 + 1e-4)
    composite = n > 2

    def negloglik(x: np.ndarray) -> float:
        theta = float(x[0])
        if composite:
            return -_gumbel_pairwise_loglik(u, theta)
        return -float(np.sum(_gumbel_log_density_2d(u, theta)))

    res = minimize(negloglik, [theta0], bounds=[(1.0 + 1e-9, 100.0)], tol=tol, max_evals=max_evals)
    spec = CopulaSpec("gumbel", n, theta=float(res.x[0]))
    return CopulaFit(spec, -res.fun, res.converged, composite=composite)


def fit_copula(
    u_matrix,
    family: str,
    tol: float = 1e-6,
    max_evals: int = 20000,
) -> CopulaFit:
    """Pseudo-maximum-likelihood fit of one family on rank-transformed data.

    Elliptical correlation starts from the normal-scores correlation
    (Gaussian) or the Kendall-tau sine transform (Student-t, whose nu is
    profiled on a grid and refined); Archimedean theta starts from
    Kendall-tau inversion. All starts are then likelihood-polished.

    For Gumbel above two dimensions the returned fit is a composite
    (pairwise) likelihood and is flagged as such.
    """
    u = np.asarray(u_matrix, dtype=float)
    if u.ndim != 2 or u.shape[1] < 2:
        raise DomainError("fit_copula requires a k x n matrix with n >= 2")
    if u.shape[0] < 50:
        raise DomainError("fit_copula requires at least 50 rows")
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise DomainError("pseudo-observations must lie strictly inside (0,1)")
    if family == "gaussian":
        return _fit_gaussian(u, tol, max_evals)
    if family == "student-t":
        return _fit_student_t(u, tol, max_evals)
    if family == "clayton":
        return _fit_clayton(u, tol, max_evals)
    if family == "gumbel":
        return _fit_gumbel(u, tol, max_evals)
    raise DomainError(f"unknown copula family {family!r}")


# ---------------------------------------------------------------------------
# plot data
# ---------------------------------------------------------------------------

def density_grid(spec: CopulaSpec, resolution: int = 50) -> np.ndarray:
    """(u, v, density) rows on a regular grid of cell midpoints in (0,1)^2.

    Only defined for bivariate specs; used to export contour data.
    """
    if spec.dim != 2:
        raise UnsupportedDimensionError("density_grid requires a bivariate spec")
    grid = (np.arange(resolution) + 0.5) / resolution
    uu, vv = np.meshgrid(grid, grid, indexing="ij")
    pts = np.column_stack([uu.ravel(), vv.ravel()])
    dens = np.exp(copula_log_density(spec, pts))
    return np.column_stack([pts, dens])
