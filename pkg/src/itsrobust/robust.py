"""Theil-Sen pairwise slopes and the robust slope-change estimator."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries, median
from .errors import TooFewPoints


class Segment(str, enum.Enum):
    PRE = "pre"
    POST = "post"


@dataclass(frozen=True, eq=False)
class SlopeSample:
    """All pairwise slopes of one segment, in lexicographic ``(i, j)`` order."""

    slopes: np.ndarray
    segment: Segment

    def __len__(self) -> int:
        return self.slopes.size

    def median(self) -> float:
        return median(self.slopes)


@dataclass(frozen=True)
class RobustEffect:
    beta13: float
    beta23: float
    beta3_hat: float


def pairwise_slopes(segment: TimeSeries, which: Segment = Segment.PRE) -> SlopeSample:
    """Slopes ``(y_j - y_i) / (t_j - t_i)`` for every pair ``i < j``."""
    n = len(segment)
    if n < 2:
        raise TooFewPoints(f"need at least 2 points for a slope, got {n}")
    i, j = np.triu_indices(n, k=1)
    t, y = segment.times, segment.values
    slopes = (y[j] - y[i]) / (t[j] - t[i])
    slopes.flags.writeable = False
    return SlopeSample(slopes, Segment(which))


def robust_effect(pre: TimeSeries, post: TimeSeries) -> RobustEffect:
    b13 = pairwise_slopes(pre, Segment.PRE).median()
    b23 = pairwise_slopes(post, Segment.POST).median()
    return RobustEffect(b13, b23, b23 - b13)
