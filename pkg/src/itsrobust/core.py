"""Domain types, pre/post segmentation and design-matrix construction."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, EmptySegment, InvalidProbability, InvalidSeries


class Coding(str, enum.Enum):
    """How the slope-change column of the design matrix is coded.

    ``RAW`` uses ``X_t * T_t``; ``CENTERED`` uses ``X_t * (T_t - t_last_pre)``
    so the level-change coefficient is measured at the last pre period.
    """

    RAW = "raw"
    CENTERED = "centered"


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered ``(time, value)`` observations for one analysis unit.

    Times must be finite and strictly increasing. Equal spacing is not
    required.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        y = np.array(self.values, dtype=float)
        if t.ndim != 1 or y.ndim != 1 or t.shape != y.shape:
            raise InvalidSeries("times and values must be 1-d arrays of equal length")
        if t.size == 0:
            raise InvalidSeries("a time series needs at least one point")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
            raise InvalidSeries("times and values must be finite")
        if np.any(np.diff(t) <= 0):
            raise InvalidSeries("times must be strictly increasing")
        t.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", y)

    @classmethod
    def from_points(cls, points: Iterable[tuple[float, float]]) -> "TimeSeries":
        pts = list(points)
        return cls(np.array([p[0] for p in pts], float), np.array([p[1] for p in pts], float))

    def __len__(self) -> int:
        return self.times.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return np.array_equal(self.times, other.times) and np.array_equal(
            self.values, other.values
        )

    def with_values(self, values: np.ndarray) -> "TimeSeries":
        return TimeSeries(self.times, values)


@dataclass(frozen=True)
class InterventionSpec:
    intervention_time: float
    coding: Coding = Coding.CENTERED


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Segmented-regression design: intercept, time, post dummy, slope change."""

    matrix: np.ndarray
    coding: Coding
    t_last_pre: float
    n_pre: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def split(series: TimeSeries, spec: InterventionSpec) -> tuple[TimeSeries, TimeSeries]:
    """Partition a series at the intervention time.

    Points strictly before ``spec.intervention_time`` form the pre segment;
    points at or after it form the post segment.
    """
    t = series.times
    k = int(np.searchsorted(t, spec.intervention_time, side="left"))
    if k == 0 or k == t.size:
        side = "pre" if k == 0 else "post"
        raise EmptySegment(
            f"no {side}-intervention points for intervention time "
            f"{spec.intervention_time:g}"
        )
    return (
        TimeSeries(t[:k], series.values[:k]),
        TimeSeries(t[k:], series.values[k:]),
    )


def build_design(series: TimeSeries, spec: InterventionSpec) -> DesignMatrix:
    pre, _ = split(series, spec)
    t = series.times
    post = (t >= spec.intervention_time).astype(float)
    t_last_pre = float(pre.times[-1])
    if spec.coding is Coding.CENTERED:
        inter = post * (t - t_last_pre)
    else:
        inter = post * t
    w = np.column_stack([np.ones_like(t), t, post, inter])
    w.flags.writeable = False
    return DesignMatrix(w, Coding(spec.coding), t_last_pre, len(pre))


def median(values: Sequence[float] | np.ndarray) -> float:
    """Sample median; even counts average the two middle order statistics."""
    s = np.sort(np.asarray(values, dtype=float).ravel())
    n = s.size
    if n == 0:
        raise EmptyInput("median of an empty sample")
    k = n // 2
    if n % 2:
        return float(s[k])
    return float((s[k - 1] + s[k]) / 2)


def quantile(values: Sequence[float] | np.ndarray, p: float) -> float:
    """Linear-interpolation quantile with 1-based position ``h = (n-1)p + 1``."""
    s = np.sort(np.asarray(values, dtype=float).ravel())
    if s.size == 0:
        raise EmptyInput("quantile of an empty sample")
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise InvalidProbability(f"p must lie in [0, 1], got {p!r}")
    h = (s.size - 1) * p  # 0-based
    lo = math.floor(h)
    hi = math.ceil(h)
    if lo == hi:
        return float(s[lo])
    frac = h - lo
    if frac == 0.5:
        # same rounding as median() so the two agree bit-for-bit
        return float((s[lo] + s[hi]) / 2)
    return float(s[lo] + frac * (s[hi] - s[lo]))
