"""CSV panel ingestion, serialization, log transform and the bundled
synthetic panel."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

import numpy as np

from .core import TimeSeries
from .errors import (
    DuplicateTime,
    EmptyCell,
    EmptyInput,
    MalformedHeader,
    NonNumericCell,
    NonPositiveValue,
)
from .rng import RngSpec

ANONYMOUS = ""

SYNTHETIC_SEED = 20080502
SYNTHETIC_YEARS = tuple(range(2002, 2016))
SYNTHETIC_INTERVENTION = 2008
SYNTHETIC_GROUPS = tuple(f"G{i:02d}" for i in range(1, 12))


@dataclass(frozen=True)
class PanelDataset:
    """Named time series, iterated in sorted group order."""

    groups: Mapping[str, TimeSeries]

    def __post_init__(self):
        if not self.groups:
            raise EmptyInput("a panel needs at least one group")
        object.__setattr__(self, "groups", dict(sorted(self.groups.items())))

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PanelDataset):
            return NotImplemented
        return list(self.groups) == list(other.groups) and all(
            self.groups[k] == other.groups[k] for k in self.groups
        )


def _number(cell: str, row: int, column: str) -> float:
    cell = cell.strip()
    if not cell:
        raise EmptyCell(row, column)
    try:
        v = float(cell)
    except ValueError:
        raise NonNumericCell(row, column, cell) from None
    if not np.isfinite(v):
        raise NonNumericCell(row, column, cell)
    return v


def read_csv_text(text: str, group_col: str = "group") -> PanelDataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MalformedHeader("file is empty") from None
    if header and header[0].startswith("﻿"):
        header[0] = header[0][1:]
    if sorted(header) == ["time", "value"]:
        gi = None
    elif len(header) == 3 and sorted(header) == sorted([group_col, "time", "value"]):
        gi = header.index(group_col)
    else:
        raise MalformedHeader(
            f"expected header 'time,value' or '{group_col},time,value', got {','.join(header)!r}"
        )
    ti, vi = header.index("time"), header.index("value")

    points: dict[str, dict[float, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MalformedHeader(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        if gi is None:
            g = ANONYMOUS
        else:
            g = row[gi].strip()
            if not g:
                raise EmptyCell(lineno, group_col)
        t = _number(row[ti], lineno, "time")
        v = _number(row[vi], lineno, "value")
        bucket = points.setdefault(g, {})
        if t in bucket:
            raise DuplicateTime(g, t)
        bucket[t] = v
    if not points:
        raise EmptyInput("no data rows")
    groups = {}
    for g, pts in points.items():
        ts = sorted(pts)
        groups[g] = TimeSeries(np.array(ts), np.array([pts[t] for t in ts]))
    return PanelDataset(groups)


def parse_csv(path: str | os.PathLike, group_col: str = "group") -> PanelDataset:
    """Read ``time,value`` or ``<group_col>,time,value`` CSV into a panel."""
    with open(path, encoding="utf-8", newline="") as fh:
        return read_csv_text(fh.read(), group_col)


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize(dataset: PanelDataset, group_col: str = "group") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    anonymous = list(dataset.groups) == [ANONYMOUS]
    w.writerow(["time", "value"] if anonymous else [group_col, "time", "value"])
    for g, s in dataset:
        for t, v in zip(s.times, s.values):
            w.writerow([_fmt(t), _fmt(v)] if anonymous else [g, _fmt(t), _fmt(v)])
    return buf.getvalue()


def log_transform(series: TimeSeries, group: str = ANONYMOUS) -> TimeSeries:
    """Natural log of every value; all values must be positive."""
    bad = np.flatnonzero(series.values <= 0)
    if bad.size:
        k = int(bad[0])
        raise NonPositiveValue(group, float(series.times[k]), float(series.values[k]))
    return series.with_values(np.log(series.values))


# Generating parameters for the bundled panel. Each row: intercept,
# pre-period log growth rate, change in log growth rate.
_SYNTHETIC_PARAMS = (
    (-1.2, 0.08, -0.04),
    (-0.6, 0.10, 0.04),
    (-1.5, 0.12, -0.05),
    (-0.9, 0.09, -0.06),
    (-0.2, 0.07, -0.12),
    (-0.4, 0.06, -0.10),
    (-1.8, 0.05, 0.02),
    (-1.0, 0.15, -0.14),
    (-1.3, 0.11, -0.09),
    (-0.7, 0.16, -0.15),
    (-0.5, 0.04, 0.01),
)
_SYNTHETIC_NOISE_SD = 0.04
# (group index, year) -> multiplicative spike on the rate scale
_SYNTHETIC_SPIKES = {(2, 2005): 2.5, (5, 2011): 0.4, (9, 2003): 2.0}


def make_synthetic_panel(seed: int = SYNTHETIC_SEED) -> PanelDataset:
    """Eleven groups of annual rates, 2002-2015, with a slope change in 2008.

    Log rates follow ``a + b (year - 2002) + c (year - 2007)_+`` plus
    Gaussian noise drawn from ``RngSpec(seed, group_index)``; a few points
    carry multiplicative spikes. Values are rounded to 6 decimals.
    """
    years = np.array(SYNTHETIC_YEARS, dtype=float)
    post = np.clip(years - (SYNTHETIC_INTERVENTION - 1), 0, None)
    groups = {}
    for i, (name, (a, b, c)) in enumerate(zip(SYNTHETIC_GROUPS, _SYNTHETIC_PARAMS)):
        noise = RngSpec(seed, i).generator().normal(0.0, _SYNTHETIC_NOISE_SD, years.size)
        rate = np.exp(a + b * (years - years[0]) + c * post + noise)
        for (gi, yr), mult in _SYNTHETIC_SPIKES.items():
            if gi == i:
                rate[int(yr - years[0])] *= mult
        groups[name] = TimeSeries(years, np.round(rate, 6))
    return PanelDataset(groups)


def synthetic_panel_path():
    return resources.files("itsrobust") / "data" / "synthetic_panel.csv"


def load_synthetic_panel() -> PanelDataset:
    return read_csv_text(synthetic_panel_path().read_text(encoding="utf-8"))
