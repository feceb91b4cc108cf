import numpy as np
import pytest

from itsrobust.autocorr import auto_lag, durbin_watson, newey_west_cov, newey_west_se, prais_winsten
from itsrobust.core import InterventionSpec, TimeSeries, build_design
from itsrobust.errors import DegenerateResiduals, InvalidLag, SingularDesign
from itsrobust.ols import ols_fit

from oracles import lag0_sandwich_se


def design(n, cut):
    t = np.arange(1, n + 1, dtype=float)
    return build_design(TimeSeries(t, np.zeros(n)), InterventionSpec(cut))


class TestDurbinWatson:
    def test_alternating(self):
        assert durbin_watson([1, -1, 1, -1]) == 3.0

    def test_constant(self):
        assert durbin_watson([2.5] * 7) == 0.0

    def test_degenerate(self):
        with pytest.raises(DegenerateResiduals):
            durbin_watson([0.0, 0.0, 0.0])

    def test_scale_invariant(self):
        e = np.random.default_rng(0).normal(size=30)
        assert durbin_watson(-3.7 * e) == pytest.approx(durbin_watson(e), rel=1e-12)

    def test_white_noise_near_two(self):
        e = np.random.default_rng(1).standard_normal(10_000)
        d = durbin_watson(e)
        assert 0 <= d <= 4
        assert d == pytest.approx(2.0, abs=0.1)


class TestNeweyWest:
    def test_auto_lag(self):
        assert auto_lag(16) == 2
        assert auto_lag(100) == 4

    def test_lag0_matches_sandwich_oracle(self):
        d = design(6, 4)
        rng = np.random.default_rng(2)
        y = rng.normal(size=6) + np.arange(6)
        e = ols_fit(d, y).residuals
        got = newey_west_se(d, e, lag=0)
        np.testing.assert_allclose(got, lag0_sandwich_se(d.matrix.tolist(), e.tolist()), rtol=1e-9)

    def test_constant_abs_residuals(self):
        d = design(16, 9)
        e = 0.7 * np.tile([1.0, -1.0, -1.0, 1.0], 4)
        got = newey_west_se(d, e, lag=0)
        np.testing.assert_allclose(got, lag0_sandwich_se(d.matrix.tolist(), e.tolist()), rtol=1e-9)
        np.testing.assert_allclose(got, 0.7 * np.sqrt(np.diag(np.linalg.inv(d.matrix.T @ d.matrix))), rtol=1e-9)

    @pytest.mark.parametrize("lag", [1, 2, 5])
    def test_matches_double_sum(self, lag):
        d = design(16, 9)
        w = d.matrix
        e = np.random.default_rng(lag).normal(size=16)
        meat = np.zeros((4, 4))
        for t in range(16):
            for s in range(16):
                l = abs(t - s)
                if l <= lag:
                    meat += (1 - l / (lag + 1)) * e[t] * e[s] * np.outer(w[t], w[s])
        inv = np.linalg.inv(w.T @ w)
        np.testing.assert_allclose(newey_west_cov(d, e, lag), inv @ meat @ inv, rtol=1e-10, atol=1e-14)

    def test_zero_residuals(self):
        assert np.all(newey_west_se(design(16, 9), np.zeros(16), lag=2) == 0)

    def test_positive_for_noisy_fit(self):
        d = design(16, 9)
        e = ols_fit(d, np.random.default_rng(3).normal(size=16)).residuals
        assert np.all(newey_west_se(d, e) > 0)

    def test_df_correction(self):
        d = design(16, 9)
        e = np.random.default_rng(4).normal(size=16)
        np.testing.assert_allclose(
            newey_west_cov(d, e, 2, df_correction=True), newey_west_cov(d, e, 2) * 16 / 12, rtol=1e-12
        )

    def test_errors(self):
        d = design(16, 9)
        with pytest.raises(InvalidLag):
            newey_west_se(d, np.ones(16), lag=16)
        with pytest.raises(InvalidLag):
            newey_west_se(d, np.ones(16), lag=-1)
        w = d.matrix.copy()
        w[:, 3] = w[:, 2]
        with pytest.raises(SingularDesign):
            newey_west_se(w, np.ones(16), lag=1)


def ar1(n, rho, rng):
    e = np.empty(n)
    e[0] = rng.standard_normal() / np.sqrt(1 - rho**2)
    for t in range(1, n):
        e[t] = rho * e[t - 1] + rng.standard_normal()
    return e


class TestPraisWinsten:
    def test_independent_errors(self):
        d = design(16, 9)
        t = d.matrix[:, 1]
        y = 4 + 4 * t + np.random.default_rng(6).standard_normal(16)
        pw = prais_winsten(d, y)
        assert abs(pw.rho) < 0.3
        np.testing.assert_allclose(pw.beta, ols_fit(d, y).beta, atol=1.0)

    def test_exact_fit_single_iteration(self):
        d = design(16, 9)
        y = 4 + 4 * d.matrix[:, 1] + 2 * d.matrix[:, 3]
        pw = prais_winsten(d, y)
        assert pw.rho == 0.0
        assert pw.iterations == 1 and pw.converged

    def test_forced_zero_rho_is_ols(self):
        d = design(16, 9)
        y = np.random.default_rng(7).normal(size=16)
        pw = prais_winsten(d, y, rho=0.0)
        np.testing.assert_allclose(pw.beta, ols_fit(d, y).beta, rtol=1e-10, atol=1e-12)

    def test_recovers_strong_ar1(self):
        n = 2000
        d = design(n, n // 2 + 1)
        t = d.matrix[:, 1]
        y = 1 + 0.01 * t + ar1(n, 0.8, np.random.default_rng(8))
        pw = prais_winsten(d, y)
        assert pw.converged
        assert pw.rho == pytest.approx(0.8, abs=0.05)

    def test_convergence_tolerance(self):
        d = design(40, 21)
        y = ar1(40, 0.5, np.random.default_rng(9))
        pw = prais_winsten(d, y, tol=1e-6)
        assert pw.converged
        again = prais_winsten(d, y, tol=1e-6, rho=pw.rho)
        np.testing.assert_allclose(again.beta, pw.beta)

    def test_nonconvergence_is_flagged(self):
        d = design(40, 21)
        y = ar1(40, 0.6, np.random.default_rng(10)) + d.matrix[:, 1]
        pw = prais_winsten(d, y, tol=1e-15, max_iter=1)
        assert not pw.converged and pw.iterations == 1

    def test_rho_clamped(self):
        d = design(16, 9)
        with pytest.warns(RuntimeWarning):
            pw = prais_winsten(d, np.arange(16.0), rho=1.2)
        assert pw.rho == 0.999
