"""Copula-DCC-GARCH risk engine.

Fits univariate GARCH volatility models, DCC correlation dynamics and
four copula families on daily return panels, then produces Monte-Carlo
VaR / CVaR / CoVaR / Delta-CoVaR, stress-test and portfolio reports.
"""

__version__ = "0.1.0"

from .mathcore import (
    RandomStream,
    cholesky,
    minimize,
    repair_correlation,
    std_normal_cdf,
    std_normal_quantile,
    student_t_cdf,
    student_t_quantile,
)
from .data import (
    PriceSeries,
    ReturnPanel,
    SummaryStats,
    align_panel,
    load_price_series,
    log_returns,
    summarize,
)
from .garch import GarchFit, GarchParams, fit_garch, filter_sigma, forecast_sigma, simulate_garch
from .dcc import DccFit, DccParams, fit_dcc, q_recursion, simulate_dcc
from .copula import (
    CopulaSpec,
    copula_cdf,
    copula_density,
    empirical_copula,
    fit_copula,
    pseudo_observations,
    sample_copula,
    tail_dependence,
)
from .gof import aic, bic, compare_families, copula_loglik, energy_distance, energy_score, rank_correlations
from .risk import (
    FittedModel,
    build_risk_report,
    covar,
    portfolio_risk,
    simulate_joint,
    stress_test,
    systemic_impact,
    var_cvar,
)

__all__ = [
    "__version__",
    "RandomStream",
    "cholesky",
    "minimize",
    "repair_correlation",
    "std_normal_cdf",
    "std_normal_quantile",
    "student_t_cdf",
    "student_t_quantile",
    "PriceSeries",
    "ReturnPanel",
    "SummaryStats",
    "align_panel",
    "load_price_series",
    "log_returns",
    "summarize",
    "GarchFit",
    "GarchParams",
    "fit_garch",
    "filter_sigma",
    "forecast_sigma",
    "simulate_garch",
    "DccFit",
    "DccParams",
    "fit_dcc",
    "q_recursion",
    "simulate_dcc",
    "CopulaSpec",
    "copula_cdf",
    "copula_density",
    "empirical_copula",
    "fit_copula",
    "pseudo_observations",
    "sample_copula",
    "tail_dependence",
    "aic",
    "bic",
    "compare_families",
    "copula_loglik",
    "energy_distance",
    "energy_score",
    "rank_correlations",
    "FittedModel",
    "build_risk_report",
    "covar",
    "portfolio_risk",
    "simulate_joint",
    "stress_test",
    "systemic_impact",
    "var_cvar",
]
