import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from copularisk.dcc import (
    DccFitError,
    DccParams,
    covariance_at,
    fit_dcc,
    forecast_correlation,
    q_recursion,
    simulate_dcc,
)
from copularisk.garch import GarchParams, fit_garch
from copularisk.mathcore import DomainError, RandomStream

import oracles

QBAR2 = np.array([[1.0, 0.5], [0.5, 1.0]])
MARGS2 = [GarchParams(omega=0.05, alpha=0.08, beta=0.90),
          GarchParams(omega=0.02, alpha=0.05, beta=0.92)]


class TestParams:
    def test_constraints(self):
        with pytest.raises(DomainError):
            DccParams(theta1=-0.1, theta2=0.5, q_bar=QBAR2)
        with pytest.raises(DomainError):
            DccParams(theta1=0.5, theta2=0.5, q_bar=QBAR2)
        with pytest.raises(DomainError):
            DccParams(theta1=0.1, theta2=0.1, q_bar=np.array([[1.0, 0.2], [0.3, 1.0]]))

    def test_round_trip(self):
        p = DccParams(theta1=0.05, theta2=0.9, q_bar=QBAR2)
        q = DccParams.from_dict(p.to_dict())
        assert q.theta1 == p.theta1 and q.theta2 == p.theta2
        assert np.array_equal(q.q_bar, p.q_bar)


class TestQRecursion:
    def test_static_when_thetas_zero(self):
        z = RandomStream(0, 0).gaussian((200, 2))
        _, r = q_recursion(DccParams(0.0, 0.0, QBAR2), z)
        assert np.max(np.abs(r - r[0])) == 0.0
        assert_allclose(r[0], QBAR2)

    def test_identity_qbar_orthogonal_shocks(self):
        z = np.zeros((100, 2))
        _, r = q_recursion(DccParams(0.3, 0.5, np.eye(2)), z)
        # z z' contributes nothing off-diagonal, so R stays the identity
        assert_allclose(r, np.broadcast_to(np.eye(2), r.shape), atol=1e-14)

    def test_matches_reference_recursion(self):
        z = RandomStream(3, 1).gaussian((400, 3))
        qbar = np.array([[1.0, 0.4, 0.1], [0.4, 1.0, -0.2], [0.1, -0.2, 1.0]])
        params = DccParams(0.06, 0.9, qbar)
        q, r = q_recursion(params, z)
        q_ref, r_ref = oracles.dcc_q_recursion(0.06, 0.9, qbar, z)
        assert np.max(np.abs(q - q_ref)) < 1e-12
        assert np.max(np.abs(r - r_ref)) < 1e-12

    def test_unit_diagonal_exact(self):
        z = RandomStream(4, 1).gaussian((300, 2))
        _, r = q_recursion(DccParams(0.05, 0.9, QBAR2), z)
        idx = np.arange(2)
        assert np.all(r[:, idx, idx] == 1.0)
        assert np.all(np.abs(r) <= 1.0 + 1e-12)

    def test_eigenvalues_nonnegative(self):
        z = RandomStream(5, 1).gaussian((500, 3))
        qbar = np.array([[1.0, 0.7, 0.5], [0.7, 1.0, 0.6], [0.5, 0.6, 1.0]])
        _, r = q_recursion(DccParams(0.08, 0.88, qbar), z)
        eigs = np.linalg.eigvalsh(r)
        assert eigs.min() >= -1e-10


class TestCovarianceAt:
    def test_identity_correlation(self):
        z = np.zeros((50, 2))
        params = DccParams(0.0, 0.0, np.eye(2))
        _, r = q_recursion(params, z)
        from copularisk.dcc import DccFit
        fit = DccFit(params=params, r_path=r, loglik=0.0, converged=True)
        h = covariance_at(fit, np.array([2.0, 3.0]), 10)
        assert_allclose(h, np.diag([4.0, 9.0]))

    def test_unit_sigma_returns_correlation(self):
        z = RandomStream(1, 2).gaussian((50, 2))
        params = DccParams(0.05, 0.9, QBAR2)
        _, r = q_recursion(params, z)
        from copularisk.dcc import DccFit
        fit = DccFit(params=params, r_path=r, loglik=0.0, converged=True)
        assert_allclose(covariance_at(fit, np.ones(2), 20), r[20])

    def test_bivariate_closed_form(self):
        z = RandomStream(2, 2).gaussian((50, 2))
        params = DccParams(0.05, 0.9, QBAR2)
        _, r = q_recursion(params, z)
        from copularisk.dcc import DccFit
        fit = DccFit(params=params, r_path=r, loglik=0.0, converged=True)
        s = np.array([1.5, 0.7])
        h = covariance_at(fit, s, 30)
        assert abs(h[0, 1] - 1.5 * 0.7 * r[30][0, 1]) < 1e-14
        assert_allclose(np.diag(h), s ** 2)

    def test_dimension_mismatch(self):
        z = np.zeros((50, 2))
        params = DccParams(0.0, 0.0, np.eye(2))
        _, r = q_recursion(params, z)
        from copularisk.dcc import DccFit
        fit = DccFit(params=params, r_path=r, loglik=0.0, converged=True)
        with pytest.raises(DomainError):
            covariance_at(fit, np.ones(3), 0)


class TestSimulate:
    def test_deterministic(self):
        p = DccParams(0.05, 0.9, QBAR2)
        a = simulate_dcc(p, MARGS2, 300, RandomStream(6, 0))
        b = simulate_dcc(p, MARGS2, 300, RandomStream(6, 0))
        assert np.array_equal(a, b)

    def test_identity_gives_uncorrelated_columns(self):
        p = DccParams(0.0, 0.0, np.eye(2))
        margs = [GarchParams(omega=1.0, alpha=0.0, beta=0.0) for _ in range(2)]
        panel = simulate_dcc(p, margs, 100_000, RandomStream(7, 0))
        corr = np.corrcoef(panel, rowvar=False)[0, 1]
        assert abs(corr) < 3.0 / math.sqrt(100_000)

    def test_constant_high_correlation(self):
        qbar = np.array([[1.0, 0.9], [0.9, 1.0]])
        p = DccParams(0.0, 0.0, qbar)
        margs = [GarchParams(omega=1.0, alpha=0.0, beta=0.0) for _ in range(2)]
        panel = simulate_dcc(p, margs, 100_000, RandomStream(8, 0))
        corr = np.corrcoef(panel, rowvar=False)[0, 1]
        assert abs(corr - 0.9) < 0.01

    def test_q_time_average_near_qbar(self):
        # stationarity: with theta1+theta2 < 1 the recursion mean-reverts to
        # q_bar; check the time average of Q_t on a long simulated path
        p = DccParams(0.05, 0.9, QBAR2)
        margs = [GarchParams(omega=0.05, alpha=0.05, beta=0.9) for _ in range(2)]
        panel = simulate_dcc(p, margs, 100_000, RandomStream(9, 0))
        fits = [fit_garch(panel[:, j], innovation="gaussian") for j in range(2)]
        z = np.column_stack([f.residuals for f in fits])
        q, _ = q_recursion(p, z)
        assert np.max(np.abs(q.mean(axis=0) - QBAR2)) < 0.02


class TestFit:
    def test_recovers_simulated_parameters(self):
        p = DccParams(0.05, 0.90, QBAR2)
        panel = simulate_dcc(p, MARGS2, 5000, RandomStream(10, 0))
        fits = [fit_garch(panel[:, j], innovation="gaussian") for j in range(2)]
        z = np.column_stack([f.residuals for f in fits])
        fit = fit_dcc(z)
        assert abs(fit.params.theta1 - 0.05) < 0.03
        assert abs(fit.params.theta2 - 0.90) < 0.05
        assert fit.converged

    def test_constant_correlation_truth_gives_small_thetas(self):
        qbar = np.array([[1.0, 0.6], [0.6, 1.0]])
        z = RandomStream(11, 0).gaussian((5000, 2)) @ np.linalg.cholesky(qbar).T
        fit = fit_dcc(z)
        assert fit.params.theta1 + fit.params.theta2 < 0.15

    def test_univariate_panel_rejected(self):
        with pytest.raises(DomainError):
            fit_dcc(np.random.default_rng(0).standard_normal((100, 1)))

    def test_constant_column_rejected(self):
        z = np.column_stack([np.ones(100), np.random.default_rng(0).standard_normal(100)])
        with pytest.raises(DccFitError):
            fit_dcc(z)

    def test_loglik_beats_standard_start(self):
        p = DccParams(0.05, 0.90, QBAR2)
        panel = simulate_dcc(p, MARGS2, 2000, RandomStream(12, 0))
        fits = [fit_garch(panel[:, j], innovation="gaussian") for j in range(2)]
        z = np.column_stack([f.residuals for f in fits])
        fit = fit_dcc(z)
        from copularisk.dcc import _dcc_quasi_loglik
        q_bar = fit.params.q_bar
        _, r_start = q_recursion(DccParams(0.02, 0.95, q_bar), z)
        assert fit.loglik >= _dcc_quasi_loglik(r_start, z)

    def test_r_path_reproducible_from_params(self):
        p = DccParams(0.05, 0.90, QBAR2)
        panel = simulate_dcc(p, MARGS2, 1000, RandomStream(13, 0))
        fits = [fit_garch(panel[:, j], innovation="gaussian") for j in range(2)]
        z = np.column_stack([f.residuals for f in fits])
        fit = fit_dcc(z)
        _, r_again = q_recursion(fit.params, z)
        assert np.array_equal(fit.r_path, r_again)


class TestExportRPath:
    def test_flattened_upper_triangle_round_trip(self, tmp_path):
        import csv
        from copularisk.dcc import DccFit, export_r_path

        z = RandomStream(15, 0).gaussian((40, 3))
        qbar = np.array([[1.0, 0.4, 0.1], [0.4, 1.0, -0.2], [0.1, -0.2, 1.0]])
        params = DccParams(0.05, 0.9, qbar)
        _, r = q_recursion(params, z)
        fit = DccFit(params=params, r_path=r, loglik=0.0, converged=True)
        path = tmp_path / "r_path.csv"
        export_r_path(fit, path, asset_ids=["a", "b", "c"])
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "a|b", "a|c", "b|c"]
        assert len(rows) - 1 == 40
        got = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
        iu = np.triu_indices(3, 1)
        assert np.array_equal(got, r[:, iu[0], iu[1]])


class TestForecastCorrelation:
    def test_one_step_formula(self):
        p = DccParams(0.05, 0.9, QBAR2)
        q_last = np.array([[1.1, 0.3], [0.3, 0.9]])
        z_last = np.array([0.5, -1.2])
        r = forecast_correlation(p, q_last, z_last)
        q_next = 0.05 * np.outer(z_last, z_last) + 0.9 * q_last + 0.05 * QBAR2
        d = np.sqrt(np.diag(q_next))
        want = q_next / np.outer(d, d)
        np.fill_diagonal(want, 1.0)
        assert_allclose(r, want, atol=1e-14)
