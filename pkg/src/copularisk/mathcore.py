"""Numerical kernel: distribution functions, Cholesky factorization, a
box-constrained derivative-free minimizer, and reproducible random streams.

All operations are pure functions of their inputs (plus stream state for
:class:`RandomStream`), so repeated calls agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, special

__all__ = [
    "DomainError",
    "CholeskyError",
    "StartError",
    "MinimizeResult",
    "RandomStream",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "student_t_cdf",
    "student_t_quantile",
    "cholesky",
    "repair_correlation",
    "validate_correlation",
    "minimize",
]


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class CholeskyError(ValueError):
    """Factorization failed; carries the index of the failing pivot."""

    def __init__(self, pivot: int):
        super().__init__(f"matrix is not positive definite (pivot {pivot} <= 0)")
        self.pivot = pivot


class StartError(ValueError):
    """The objective is not finite at the optimizer start point."""


# ---------------------------------------------------------------------------
# distribution functions
# ---------------------------------------------------------------------------

def std_normal_cdf(x):
    """Standard normal CDF. Accepts scalars or arrays; absolute error <1e-10."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("std_normal_cdf requires finite input")
    out = special.ndtr(arr)
    return float(out) if np.ndim(x) == 0 else out


def std_normal_pdf(x):
    """Standard normal density."""
    arr = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi)
    return float(out) if np.ndim(x) == 0 else out


def std_normal_quantile(p):
    """Inverse standard normal CDF on the open interval (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("std_normal_quantile requires 0 < p < 1")
    out = special.ndtri(arr)
    return float(out) if np.ndim(p) == 0 else out


def student_t_cdf(x, nu: float):
    """Student-t CDF with (possibly non-integer) degrees of freedom ``nu > 0``.

    Evaluated through the regularized incomplete beta function, so ``nu``
    may vary continuously during likelihood profiling.
    """
    if not (nu > 0.0) or not math.isfinite(nu):
        raise DomainError("student_t_cdf requires nu > 0")
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("student_t_cdf requires finite input")
    out = special.stdtr(nu, arr)
    return float(out) if np.ndim(x) == 0 else out


def student_t_quantile(p, nu: float):
    """Inverse Student-t CDF for ``0 < p < 1`` and ``nu > 0``."""
    if not (nu > 0.0) or not math.isfinite(nu):
        raise DomainError("student_t_quantile requires nu > 0")
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("student_t_quantile requires 0 < p < 1")
    out = special.stdtrit(nu, arr)
    return float(out) if np.ndim(p) == 0 else out


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

def cholesky(sigma) -> np.ndarray:
    """Lower-triangular Cholesky factor ``L`` with ``L @ L.T == sigma``.

    Raises
    ------
    CholeskyError
        If the matrix is not positive definite; the exception carries the
        index of the first non-positive pivot.
    """
    a = np.asarray(sigma, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("cholesky requires a square matrix")
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        pass
    # Rerun column by column to locate the failing pivot for diagnostics.
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - low[j, :j] @ low[j, :j]
        if not (d > 0.0) or not np.isfinite(d):
            raise CholeskyError(j) from None
        low[j, j] = math.sqrt(d)
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def repair_correlation(matrix, floor: float = 1e-10) -> Tuple[np.ndarray, bool]:
    """Project an almost-correlation matrix onto the PSD cone.

    Eigenvalues below ``floor`` are clipped and the result is renormalized
    to a unit diagonal. Rank-based correlation estimates can come out
    slightly indefinite, which is the case this handles.

    Returns the (possibly repaired) matrix and a flag saying whether a
    repair was applied.
    """
    a = np.asarray(matrix, dtype=float)
    a = 0.5 * (a + a.T)
    w, v = np.linalg.eigh(a)
    if w[0] >= floor:
        out = a.copy()
        np.fill_diagonal(out, 1.0)
        return out, False
    w = np.maximum(w, floor)
    b = (v * w) @ v.T
    d = np.sqrt(np.diag(b))
    b = b / np.outer(d, d)
    b = 0.5 * (b + b.T)
    np.fill_diagonal(b, 1.0)
    return b, True


def validate_correlation(matrix, repair: bool = True) -> np.ndarray:
    """Check correlation-matrix invariants, optionally repairing near-PSD input.

    Requires symmetry, a unit diagonal and off-diagonal entries in [-1, 1].
    With ``repair=False`` a non-PSD matrix raises :class:`CholeskyError`.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("correlation matrix must be square")
    if not np.allclose(a, a.T, atol=1e-8):
        raise DomainError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(a), 1.0, atol=1e-8):
        raise DomainError("correlation matrix must have a unit diagonal")
    if np.any(np.abs(a) > 1.0 + 1e-8):
        raise DomainError("correlation entries must lie in [-1, 1]")
    if repair:
        out, _ = repair_correlation(a)
        return out
    cholesky(a)
    out = 0.5 * (a + a.T)
    np.fill_diagonal(out, 1.0)
    return out


# ---------------------------------------------------------------------------
# derivative-free minimization
# ---------------------------------------------------------------------------

@dataclass
class MinimizeResult:
    """Outcome of :func:`minimize`.

    ``converged`` is True when the simplex collapsed below tolerance;
    ``reason`` records whether the run stopped on "tolerance" or
    "max_evals".
    """

    x: np.ndarray
    fun: float
    converged: bool
    reason: str
    n_evals: int


def _safe_exp(v: float) -> float:
    """exp that saturates instead of raising on extreme search iterates."""
    return math.exp(min(v, 700.0))


def _sigmoid(v: float) -> float:
    if v >= 0.0:
        return 1.0 / (1.0 + math.exp(-v))
    z = math.exp(v)
    return z / (1.0 + z)


class _BoxTransform:
    """Map between a per-coordinate box and unconstrained coordinates.

    Finite two-sided bounds use a logit, one-sided bounds a log shift, so
    constraints like positivity or an open interval hold by construction.
    Extreme iterates saturate at the box edge rather than overflowing; the
    objective wrapper treats any resulting non-finite value as a penalty.
    """

    def __init__(self, bounds, dim: int):
        if bounds is None:
            bounds = [(None, None)] * dim
        if len(bounds) != dim:
            raise DomainError("bounds length must match dimension")
        self.bounds = [
            (-math.inf if lo is None else float(lo),
             math.inf if hi is None else float(hi))
            for lo, hi in bounds
        ]
        for lo, hi in self.bounds:
            if not lo < hi:
                raise DomainError("each bound must satisfy lo < hi")

    def to_internal(self, x: np.ndarray) -> np.ndarray:
        s = np.empty_like(x)
        for i, (lo, hi) in enumerate(self.bounds):
            xi = x[i]
            if not lo < xi < hi:
                raise StartError(f"start point must be strictly inside bounds (coord {i})")
            if math.isinf(lo) and math.isinf(hi):
                s[i] = xi
            elif math.isinf(hi):
                s[i] = math.log(xi - lo)
            elif math.isinf(lo):
                s[i] = math.log(hi - xi)
            else:
                z = (xi - lo) / (hi - lo)
                s[i] = math.log(z / (1.0 - z))
        return s

    def to_native(self, s: np.ndarray) -> np.ndarray:
        x = np.empty_like(s)
        for i, (lo, hi) in enumerate(self.bounds):
            si = s[i]
            if math.isinf(lo) and math.isinf(hi):
                x[i] = si
            elif math.isinf(hi):
                x[i] = lo + _safe_exp(si)
            elif math.isinf(lo):
                x[i] = hi - _safe_exp(si)
            else:
                x[i] = lo + (hi - lo) * _sigmoid(si)
        return x


_PENALTY = 1e300


def minimize(
    f: Callable[[np.ndarray], float],
    x0,
    bounds: Optional[Sequence[Tuple[Optional[float], Optional[float]]]] = None,
    tol: float = 1e-8,
    max_evals: int = 20000,
) -> MinimizeResult:
    """Nelder-Mead minimization over a per-coordinate box.

    The search runs in unconstrained coordinates (log for one-sided
    bounds, logit for finite intervals), so iterates never leave the box.
    The returned objective value is never worse than ``f(x0)``: if the
    simplex fails to improve, ``x0`` itself is returned.

    Parameters
    ----------
    f : callable
        Objective; must be finite at ``x0``. Non-finite values elsewhere
        are treated as a large penalty.
    x0 : array-like
        Start point, strictly inside the bounds.
    bounds : sequence of (lo, hi) pairs, optional
        ``None`` entries mean unbounded on that side.
    tol : float
        Simplex diameter tolerance for declaring convergence.
    max_evals : int
        Evaluation budget.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    transform = _BoxTransform(bounds, x0.size)
    f0 = float(f(x0))
    if not np.isfinite(f0):
        raise StartError("objective is not finite at the start point")
    s0 = transform.to_internal(x0)

    def wrapped(s: np.ndarray) -> float:
        val = float(f(transform.to_native(s)))
        return val if np.isfinite(val) else _PENALTY

    res = optimize.minimize(
        wrapped,
        s0,
        method="Nelder-Mead",
        options={
            "xatol": tol,
            "fatol": tol,
            "maxfev": max_evals,
            "adaptive": True,
        },
    )
    x_star = transform.to_native(np.asarray(res.x, dtype=float))
    f_star = float(f(x_star))
    if not np.isfinite(f_star) or f_star >= f0:
        x_star, f_star = x0.copy(), f0
    converged = bool(res.success)
    return MinimizeResult(
        x=x_star,
        fun=f_star,
        converged=converged,
        reason="tolerance" if converged else "max_evals",
        n_evals=int(res.nfev),
    )


# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------

class RandomStream:
    """Deterministic random source keyed by ``(seed, stream_id)``.

    The same pair replays the same sequence; distinct stream ids give
    statistically independent sequences. Instances are single-owner:
    they may be handed between threads but not used concurrently.
    """

    def __init__(self, seed: int, stream_id: int = 0, _subkey: tuple = ()):
        if int(seed) < 0 or int(stream_id) < 0:
            raise DomainError("seed and stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._key = (self.stream_id,) + tuple(_subkey)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=self.seed, spawn_key=self._key))
        )

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id}, key={self._key})"

    def substream(self, index: int) -> "RandomStream":
        """Derived independent stream; deterministic in (parent, index)."""
        return RandomStream(self.seed, self.stream_id, self._key[1:] + (int(index),))

    def uniform(self, size=None):
        """Uniform draws on the open interval (0, 1)."""
        u = self._gen.random(size)
        if np.ndim(u) == 0:
            while u == 0.0:
                u = self._gen.random()
            return float(u)
        mask = u == 0.0
        while mask.any():
            u[mask] = self._gen.random(int(mask.sum()))
            mask = u == 0.0
        return u

    def gaussian(self, size=None):
        out = self._gen.standard_normal(size)
        return float(out) if size is None else out

    def exponential(self, size=None):
        out = self._gen.standard_exponential(size)
        return float(out) if size is None else out

    def gamma(self, shape: float, size=None):
        if not shape > 0.0:
            raise DomainError("gamma shape must be positive")
        out = self._gen.gamma(shape, 1.0, size)
        return float(out) if size is None else out

    def student_t(self, nu: float, size=None):
        if not nu > 0.0:
            raise DomainError("student_t requires nu > 0")
        out = self._gen.standard_t(nu, size)
        return float(out) if size is None else out

    def positive_stable(self, a: float, size=None):
        """One-sided stable draws with Laplace transform exp(-t**a), 0 < a <= 1.

        Kanter's construction: theta ~ U(0, pi), W ~ Exp(1),
        S = sin(a*theta) / sin(theta)**(1/a) * (sin((1-a)*theta) / W)**((1-a)/a).
        At a = 1 the law degenerates to the constant 1.
        """
        if not 0.0 < a <= 1.0:
            raise DomainError("positive_stable requires 0 < a <= 1")
        if a == 1.0:
            out = np.ones(() if size is None else size)
            return float(out) if size is None else out
        theta = self._gen.random(size) * math.pi
        theta = np.where(theta == 0.0, np.pi / 2.0, theta)
        w = self._gen.standard_exponential(size)
        w = np.where(w == 0.0, 1e-300, w)
        out = (
            np.sin(a * theta)
            / np.sin(theta) ** (1.0 / a)
            * (np.sin((1.0 - a) * theta) / w) ** ((1.0 - a) / a)
        )
        return float(out) if size is None else out

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    @property
    def generator(self) -> np.random.Generator:
        """Underlying numpy generator (consumes stream state when used)."""
        return self._gen
