import numpy as np
import pytest

from itsrobust.bootstrap import (
    bootstrap_inference,
    bootstrap_null_test,
    bootstrap_percentile_ci,
    independent_replicates,
    null_replicates,
    null_test_from_replicates,
    percentile_ci,
)
from itsrobust.core import InterventionSpec, split
from itsrobust.errors import EmptySlopeSample, InsufficientReplicates, InvalidAlpha
from itsrobust.power import SimConfig, simulate_series
from itsrobust.rng import RngSpec
from itsrobust.robust import Segment, pairwise_slopes

from oracles import two_valued_pooled_bootstrap

RNG = RngSpec(2024)


class TestNullTest:
    def test_constant_samples(self):
        res = bootstrap_null_test(np.full(28, 3.0), np.full(28, 3.0), 1000, RNG)
        assert res.asl == 1.0 and res.p_two_sided == 1.0

    @pytest.mark.parametrize("n", [5, 28])
    def test_separated_constants_match_exact_law(self, n):
        # A two-valued pool has a closed-form bootstrap law; the estimated
        # tail probabilities must agree with it within Monte Carlo error.
        law = two_valued_pooled_bootstrap(n, n, n, n, 0.0, 10.0)
        p_ge = float(sum(p for v, p in law.items() if v >= 10.0))
        p_le = float(sum(p for v, p in law.items() if v <= 10.0))
        B = 20000
        res = bootstrap_null_test(np.zeros(n), np.full(n, 10.0), B, RNG)
        tol = 4 * np.sqrt(p_ge * (1 - p_ge) / B)
        assert res.asl == pytest.approx(p_ge, abs=tol)
        assert res.p_two_sided == pytest.approx(min(1.0, 2 * min(p_ge, p_le)), abs=2 * tol)

    def test_separated_constants_exact_values(self):
        law = two_valued_pooled_bootstrap(28, 28, 28, 28, 0.0, 10.0)
        p_ge = float(sum(p for v, p in law.items() if v >= 10.0))
        assert p_ge == pytest.approx(0.18086053489972920, abs=1e-15)
        law5 = two_valued_pooled_bootstrap(5, 5, 5, 5, 0.0, 10.0)
        assert float(sum(p for v, p in law5.items() if v >= 10.0)) == 0.25

    def test_asl_complement(self):
        rng = np.random.default_rng(1)
        v, w = rng.normal(size=28), rng.normal(0.5, 1, 28)
        reps = null_replicates(v, w, 500, RNG)
        obs = float(np.median(w) - np.median(v))
        res = null_test_from_replicates(reps, obs)
        assert res.asl + np.count_nonzero(reps < obs) / reps.size == 1.0
        assert res == bootstrap_null_test(v, w, 500, RNG)

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        v, w = rng.normal(size=28), rng.normal(size=28)
        assert bootstrap_null_test(v, w, 1000, RngSpec(7, 3)) == bootstrap_null_test(v, w, 1000, RngSpec(7, 3))

    def test_errors(self):
        with pytest.raises(EmptySlopeSample):
            bootstrap_null_test([], [1.0], 1000, RNG)
        with pytest.raises(InsufficientReplicates):
            bootstrap_null_test([1.0], [1.0], 99, RNG)

    def test_null_mean_asl_near_half(self):
        config = SimConfig()
        spec = config.intervention
        asl = []
        for r in range(500):
            s = simulate_series(config, 0.0, RngSpec(99, r))
            pre, post = split(s, spec)
            asl.append(
                bootstrap_null_test(pairwise_slopes(pre), pairwise_slopes(post, Segment.POST), 200, RngSpec(99, r).child(1)).asl
            )
        assert 0.40 <= np.mean(asl) <= 0.60


class TestPercentileCi:
    def test_constant_samples(self):
        lo, hi = bootstrap_percentile_ci(np.full(10, 2.0), np.full(10, 2.0), 500, 0.05, RNG)
        assert lo == hi == 0.0

    def test_shift_of_constants(self):
        assert bootstrap_percentile_ci([0, 0, 0, 0], [1, 1, 1, 1], 1000, 0.05, RNG) == (1.0, 1.0)

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(2)
        reps = independent_replicates(rng.normal(size=28), rng.normal(size=28), 1000, RNG)
        prev = None
        for a in (0.01, 0.05, 0.1, 0.2, 0.5):
            lo, hi = percentile_ci(reps, a)
            assert lo <= hi
            if prev:
                assert lo >= prev[0] and hi <= prev[1]
            prev = (lo, hi)

    def test_invalid_alpha(self):
        with pytest.raises(InvalidAlpha):
            bootstrap_percentile_ci([1.0], [2.0], 100, 1.0, RNG)


def test_inference_bundle():
    rng = np.random.default_rng(3)
    v, w = rng.normal(size=28), rng.normal(1, 1, 28)
    res = bootstrap_inference(v, w, 1000, 0.05, RngSpec(11))
    assert res.beta3_observed == float(np.median(w) - np.median(v))
    assert res.ci[0] <= res.beta3_observed <= res.ci[1]
    assert res.seed == 11 and res.B == 1000
    assert res == bootstrap_inference(v, w, 1000, 0.05, RngSpec(11))
    assert 0 <= res.asl <= 1 and 0 <= res.p_two_sided <= 1
