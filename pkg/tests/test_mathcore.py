import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from copularisk.mathcore import (
    CholeskyError,
    DomainError,
    RandomStream,
    StartError,
    cholesky,
    minimize,
    repair_correlation,
    std_normal_cdf,
    std_normal_quantile,
    student_t_cdf,
    student_t_quantile,
)

import oracles


class TestNormalCdf:
    def test_symmetry_at_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_far_left_tail_vanishes(self):
        assert std_normal_cdf(-40.0) <= 1e-300

    def test_value_against_series_oracle(self):
        x = 1.6448536269514722
        assert abs(std_normal_cdf(x) - oracles.normal_cdf_series(x)) < 1e-10
        assert_allclose(std_normal_cdf(x), 0.95, atol=1e-10)

    def test_oracle_agreement_on_grid(self):
        for x in np.linspace(-6.0, 6.0, 121):
            assert abs(std_normal_cdf(x) - oracles.normal_cdf_series(x)) < 1e-10

    def test_reflection_sums_to_one(self):
        x = np.linspace(-8.0, 8.0, 400)
        assert np.max(np.abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0)) < 1e-12

    def test_monotone(self):
        x = np.linspace(-10, 10, 2001)
        assert np.all(np.diff(std_normal_cdf(x)) >= 0.0)

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            std_normal_cdf(np.nan)
        with pytest.raises(DomainError):
            std_normal_cdf(np.inf)


class TestNormalQuantile:
    def test_median(self):
        assert std_normal_quantile(0.5) == 0.0

    def test_antisymmetry(self):
        for p in (0.01, 0.1, 0.25, 0.4):
            assert abs(std_normal_quantile(p) + std_normal_quantile(1.0 - p)) < 1e-12

    def test_value_vs_bisection_oracle(self):
        want = oracles.bisect_quantile(oracles.normal_cdf_series, 0.95)
        assert abs(std_normal_quantile(0.95) - want) < 1e-9
        assert_allclose(std_normal_quantile(0.95), 1.6449, atol=1e-4)

    def test_round_trip_grid(self):
        p = np.linspace(0.0005, 0.9995, 1000)
        back = std_normal_cdf(std_normal_quantile(p))
        assert np.max(np.abs(back - p)) < 1e-9

    def test_domain(self):
        for bad in (0.0, 1.0, -0.2, 1.3):
            with pytest.raises(DomainError):
                std_normal_quantile(bad)


class TestStudentT:
    def test_cauchy_closed_form(self):
        assert_allclose(student_t_quantile(0.75, 1.0), 1.0, atol=1e-10)

    def test_symmetry_at_zero(self):
        for nu in (0.7, 1.0, 4.0, 25.0):
            assert student_t_cdf(0.0, nu) == 0.5

    def test_quantile_vs_quadrature_oracle(self):
        q = student_t_quantile(0.95, 5.0)
        assert abs(oracles.t_cdf_quadrature(q, 5.0) - 0.95) < 1e-6

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.5, 5.0, 10.0, 50.0])
    def test_round_trip_grid(self, nu):
        p = np.linspace(0.001, 0.999, 1000)
        back = student_t_cdf(student_t_quantile(p, nu), nu)
        assert np.max(np.abs(back - p)) < 1e-8

    def test_large_nu_matches_normal(self):
        x = np.linspace(-5, 5, 101)
        diff = np.abs(student_t_cdf(x, 1e6) - std_normal_cdf(x))
        assert np.max(diff) < 1e-6

    def test_domain(self):
        with pytest.raises(DomainError):
            student_t_cdf(0.0, 0.0)
        with pytest.raises(DomainError):
            student_t_quantile(0.5, -1.0)


class TestCholesky:
    def test_identity(self):
        assert_allclose(cholesky(np.eye(4)), np.eye(4))

    def test_2x2_closed_form(self):
        rho = 0.6
        low = cholesky(np.array([[1.0, rho], [rho, 1.0]]))
        assert_allclose(low, [[1.0, 0.0], [rho, math.sqrt(1 - rho * rho)]], atol=1e-14)

    def test_random_psd_reconstruction(self):
        rng = np.random.default_rng(123)
        a = rng.standard_normal((6, 10))
        m = a @ a.T
        d = np.sqrt(np.diag(m))
        sigma = m / np.outer(d, d)
        low = cholesky(sigma)
        assert np.max(np.abs(low @ low.T - sigma)) < 1e-10
        assert np.all(np.diag(low) > 0.0)
        assert_allclose(np.triu(low, 1), 0.0)

    def test_many_sizes(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 13))
            a = rng.standard_normal((n, n + 3))
            m = a @ a.T
            d = np.sqrt(np.diag(m))
            sigma = m / np.outer(d, d)
            low = cholesky(sigma)
            assert np.max(np.abs(low @ low.T - sigma)) < 1e-10

    def test_non_psd_reports_pivot(self):
        bad = np.array([[1.0, 0.0, 0.0],
                        [0.0, 1.0, 2.0],
                        [0.0, 2.0, 1.0]])
        with pytest.raises(CholeskyError) as err:
            cholesky(bad)
        assert err.value.pivot == 2


class TestRepairCorrelation:
    def test_psd_input_untouched(self):
        sigma = np.array([[1.0, 0.3], [0.3, 1.0]])
        out, repaired = repair_correlation(sigma)
        assert not repaired
        assert_allclose(out, sigma)

    def test_indefinite_input_repaired(self):
        bad = np.array([[1.0, 0.9, -0.9],
                        [0.9, 1.0, 0.9],
                        [-0.9, 0.9, 1.0]])
        out, repaired = repair_correlation(bad)
        assert repaired
        assert_allclose(np.diag(out), 1.0)
        assert np.min(np.linalg.eigvalsh(out)) >= 0.0
        cholesky(out + 1e-12 * np.eye(3))


class TestMinimize:
    def test_quadratic(self):
        res = minimize(lambda x: (x[0] - 3.0) ** 2, [0.0])
        assert abs(res.x[0] - 3.0) < 1e-6

    def test_rosenbrock(self):
        rb = lambda x: (1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2
        res = minimize(rb, [-1.2, 1.0])
        assert_allclose(res.x, [1.0, 1.0], atol=1e-4)
        assert res.fun < 1e-8

    def test_constant_objective_returns_start(self):
        res = minimize(lambda x: 5.0, [1.0, 2.0])
        assert_allclose(res.x, [1.0, 2.0])
        assert res.fun == 5.0
        assert res.converged
        assert res.reason == "tolerance"

    def test_bounded_positive(self):
        res = minimize(lambda x: (math.log(x[0]) - 1.0) ** 2, [0.5],
                       bounds=[(1e-12, None)])
        assert_allclose(res.x[0], math.e, rtol=1e-5)

    def test_never_worse_than_start(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.standard_normal(3)
            f = lambda x: float(np.sum((x - a) ** 4) + math.sin(x[0]))
            x0 = rng.standard_normal(3)
            res = minimize(f, x0, max_evals=60)
            assert res.fun <= f(x0)

    def test_nonfinite_start_raises(self):
        with pytest.raises(StartError):
            minimize(lambda x: math.inf, [0.0])

    def test_budget_reported(self):
        rb = lambda x: (1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2
        res = minimize(rb, [-1.2, 1.0], max_evals=15)
        assert not res.converged
        assert res.reason == "max_evals"

    def test_bit_for_bit_repeatable(self):
        rb = lambda x: (1 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2
        r1 = minimize(rb, [-1.2, 1.0])
        r2 = minimize(rb, [-1.2, 1.0])
        assert np.array_equal(r1.x, r2.x) and r1.fun == r2.fun


class TestRandomStream:
    def test_same_key_replays(self):
        a = RandomStream(99, 4).uniform(100)
        b = RandomStream(99, 4).uniform(100)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RandomStream(99, 0).uniform(100)
        b = RandomStream(99, 1).uniform(100)
        assert not np.array_equal(a, b)

    def test_uniform_open_interval(self):
        u = RandomStream(1, 0).uniform(200_000)
        assert np.all((u > 0.0) & (u < 1.0))

    def test_gamma_moment(self):
        n = 1_000_000
        draws = RandomStream(3, 0).gamma(3.0, n)
        se = math.sqrt(3.0 / n)
        assert abs(np.mean(draws) - 3.0) < 3.0 * se

    def test_positive_stable_degenerate_at_one(self):
        assert np.array_equal(RandomStream(1, 0).positive_stable(1.0, 50), np.ones(50))

    def test_positive_stable_fractional_moment(self):
        # E[S^b] = Gamma(1 - b/a) / Gamma(1 - b) for b < a; use b = a/4 so
        # the estimator itself has finite variance
        a, b = 0.5, 0.125
        n = 1_000_000
        draws = RandomStream(17, 0).positive_stable(a, n)
        xb = draws ** b
        target = math.gamma(1.0 - b / a) / math.gamma(1.0 - b)
        se = float(np.std(xb) / math.sqrt(n))
        assert abs(np.mean(xb) - target) < 3.0 * se

    def test_substream_independent_and_deterministic(self):
        s = RandomStream(5, 2)
        a1 = s.substream(0).uniform(50)
        a2 = RandomStream(5, 2).substream(0).uniform(50)
        b = s.substream(1).uniform(50)
        assert np.array_equal(a1, a2)
        assert not np.array_equal(a1, b)

    def test_rejects_negative_seed(self):
        with pytest.raises(DomainError):
            RandomStream(-1)
