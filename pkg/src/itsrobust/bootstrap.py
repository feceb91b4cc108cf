"""Bootstrap inference for the robust slope change.

The null test pools both slope samples and resamples from the pool, which
imposes equal slope distributions before and after the intervention. The
percentile interval resamples each slope sample on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import quantile
from .errors import EmptySlopeSample, InsufficientReplicates, InvalidAlpha
from .rng import RngSpec
from .robust import SlopeSample

DEFAULT_B = 1000
MIN_B = 100


class NullTest(NamedTuple):
    asl: float
    p_two_sided: float


@dataclass(frozen=True)
class BootstrapResult:
    B: int
    beta3_observed: float
    asl: float
    p_two_sided: float
    ci: tuple[float, float]
    alpha: float
    seed: int


def _as_array(sample) -> np.ndarray:
    arr = sample.slopes if isinstance(sample, SlopeSample) else np.asarray(sample, float)
    if arr.size == 0:
        raise EmptySlopeSample("slope sample is empty")
    return arr


def _check(B: int) -> None:
    if B < MIN_B:
        raise InsufficientReplicates(f"B must be at least {MIN_B}, got {B}")


def _row_medians(draws: np.ndarray) -> np.ndarray:
    # np.median averages the two middle order statistics for even widths,
    # matching core.median
    return np.median(draws, axis=1)


def observed_effect(pre_slopes, post_slopes) -> float:
    v, w = _as_array(pre_slopes), _as_array(post_slopes)
    return float(np.median(w) - np.median(v))


def null_replicates(pre_slopes, post_slopes, B: int, rng: RngSpec) -> np.ndarray:
    """Slope-change replicates drawn from the pooled sample (null world)."""
    v, w = _as_array(pre_slopes), _as_array(post_slopes)
    _check(B)
    pool = np.concatenate([v, w])
    n1 = v.size
    idx = rng.generator().integers(0, pool.size, size=(B, pool.size))
    draws = pool[idx]
    return _row_medians(draws[:, n1:]) - _row_medians(draws[:, :n1])


def independent_replicates(pre_slopes, post_slopes, B: int, rng: RngSpec) -> np.ndarray:
    """Slope-change replicates resampling each segment separately."""
    v, w = _as_array(pre_slopes), _as_array(post_slopes)
    _check(B)
    gen = rng.generator()
    iv = gen.integers(0, v.size, size=(B, v.size))
    iw = gen.integers(0, w.size, size=(B, w.size))
    return _row_medians(w[iw]) - _row_medians(v[iv])


def null_test_from_replicates(replicates: np.ndarray, observed: float) -> NullTest:
    B = replicates.size
    n_ge = int(np.count_nonzero(replicates >= observed))
    n_le = int(np.count_nonzero(replicates <= observed))
    asl = n_ge / B
    return NullTest(asl, min(1.0, 2.0 * min(asl, n_le / B)))


def bootstrap_null_test(pre_slopes, post_slopes, B: int = DEFAULT_B, rng: RngSpec | None = None) -> NullTest:
    """Achieved significance level for ``H0: beta3 = 0``.

    ``asl`` counts replicates at or above the observed effect (ties
    included); ``p_two_sided`` doubles the smaller tail and caps at 1.
    """
    rng = RngSpec(0) if rng is None else rng
    reps = null_replicates(pre_slopes, post_slopes, B, rng)
    return null_test_from_replicates(reps, observed_effect(pre_slopes, post_slopes))


def percentile_ci(replicates: np.ndarray, alpha: float) -> tuple[float, float]:
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}")
    return quantile(replicates, alpha / 2), quantile(replicates, 1 - alpha / 2)


def bootstrap_percentile_ci(
    pre_slopes, post_slopes, B: int = DEFAULT_B, alpha: float = 0.05, rng: RngSpec | None = None
) -> tuple[float, float]:
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}")
    rng = RngSpec(0) if rng is None else rng
    return percentile_ci(independent_replicates(pre_slopes, post_slopes, B, rng), alpha)


def bootstrap_inference(
    pre_slopes, post_slopes, B: int = DEFAULT_B, alpha: float = 0.05, rng: RngSpec | None = None
) -> BootstrapResult:
    """Null test and percentile interval on separate sub-streams of ``rng``."""
    rng = RngSpec(0) if rng is None else rng
    test = bootstrap_null_test(pre_slopes, post_slopes, B, rng.child(0))
    ci = bootstrap_percentile_ci(pre_slopes, post_slopes, B, alpha, rng.child(1))
    return BootstrapResult(
        B=B,
        beta3_observed=observed_effect(pre_slopes, post_slopes),
        asl=test.asl,
        p_two_sided=test.p_two_sided,
        ci=ci,
        alpha=alpha,
        seed=rng.seed,
    )
