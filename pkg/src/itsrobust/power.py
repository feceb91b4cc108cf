"""Monte Carlo power study comparing the t test with the robust bootstrap test.

Replication ``r`` owns the stream ``RngSpec(seed, r)``: sub-stream 0 draws
the errors and sub-stream 1 drives the bootstrap. The same errors are reused
across effect sizes (common random numbers), and the aggregate does not
depend on how replications are distributed over workers.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .bootstrap import bootstrap_null_test
from .core import Coding, InterventionSpec, TimeSeries, build_design, split
from .errors import InvalidConfig
from .ols import ols_fit, t_test_beta3
from .rng import RngSpec
from .robust import Segment, pairwise_slopes


class ErrorKind(str, enum.Enum):
    NORMAL = "normal"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class ErrorModel:
    """i.i.d. error law. ``scale`` multiplies every draw; 0 gives noiseless data."""

    kind: ErrorKind = ErrorKind.NORMAL
    rate: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        if self.kind is ErrorKind.EXPONENTIAL and not self.rate > 0:
            raise InvalidConfig(f"exponential rate must be positive, got {self.rate}")

    @classmethod
    def normal(cls) -> "ErrorModel":
        return cls(ErrorKind.NORMAL)

    @classmethod
    def exponential(cls, rate: float) -> "ErrorModel":
        return cls(ErrorKind.EXPONENTIAL, rate=rate)

    def sample(self, gen: np.random.Generator, n: int) -> np.ndarray:
        if self.kind is ErrorKind.EXPONENTIAL:
            u = 1.0 - gen.random(n)  # uniform on (0, 1]
            draws = -np.log(u) / self.rate
        else:
            draws = gen.standard_normal(n)
        return self.scale * draws

    def label(self) -> str:
        if self.kind is ErrorKind.EXPONENTIAL:
            return f"exp:{self.rate:g}"
        return "normal"


def default_effects(error: ErrorModel) -> tuple[float, ...]:
    if error.kind is ErrorKind.EXPONENTIAL:
        return effect_grid(0.0, 10.0, 1.0)
    return effect_grid(0.0, 1.0, 0.1)


def effect_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive grid ``lo, lo+step, ..., hi`` rounded to 12 decimals."""
    if not step > 0 or hi < lo:
        raise InvalidConfig(f"bad effect grid {lo}:{hi}:{step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(round(lo + i * step, 12) for i in range(count))


@dataclass(frozen=True)
class SimConfig:
    n_pre: int = 8
    n_post: int = 8
    beta: tuple[float, float, float, float] = (4.0, 4.0, 0.0, 0.0)
    effect_sizes: tuple[float, ...] = field(default_factory=lambda: effect_grid(0.0, 1.0, 0.1))
    error: ErrorModel = field(default_factory=ErrorModel.normal)
    R: int = 1000
    B: int = 1000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n_pre < 2 or self.n_post < 2:
            raise InvalidConfig("each segment needs at least 2 points")
        if self.n_pre + self.n_post < 5:
            raise InvalidConfig("need at least 5 observations in total")
        if len(self.beta) != 4:
            raise InvalidConfig("beta must have four entries")
        if not (0 < self.alpha < 1):
            raise InvalidConfig(f"alpha must lie in (0, 1), got {self.alpha}")
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "effect_sizes", tuple(float(e) for e in self.effect_sizes))

    @property
    def n(self) -> int:
        return self.n_pre + self.n_post

    @property
    def intervention(self) -> InterventionSpec:
        return InterventionSpec(self.n_pre + 1, Coding.CENTERED)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["error"] = {"kind": self.error.kind.value, "rate": self.error.rate, "scale": self.error.scale}
        d["beta"] = list(self.beta)
        d["effect_sizes"] = list(self.effect_sizes)
        return d


@dataclass(frozen=True)
class PowerRow:
    effect: float
    power_t: float
    power_robust: float
    rejections_t: int
    rejections_robust: int


@dataclass(frozen=True)
class PowerGrid:
    rows: tuple[PowerRow, ...]
    config: SimConfig

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["effect", "power_t", "power_robust"])
        for r in self.rows:
            w.writerow([repr(r.effect), repr(r.power_t), repr(r.power_robust)])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "metadata": {"version": __version__, **self.config.to_dict()},
            "rows": [asdict(r) for r in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"{'effect':>8} {'t-test':>8} {'robust':>8}"]
        for r in self.rows:
            lines.append(f"{r.effect:8.3g} {r.power_t:8.3f} {r.power_robust:8.3f}")
        return "\n".join(lines) + "\n"


def simulate_series(config: SimConfig, effect: float, rng: RngSpec) -> TimeSeries:
    """One draw of the segmented model at times ``1..n`` with slope change ``effect``."""
    t = np.arange(1, config.n + 1, dtype=float)
    post = (t > config.n_pre).astype(float)
    b0, b1, b2, _ = config.beta
    mean = b0 + b1 * t + b2 * post + effect * post * (t - config.n_pre)
    return TimeSeries(t, mean + config.error.sample(rng.generator(), config.n))


def _replication(config: SimConfig, r: int) -> tuple[list[bool], list[bool]]:
    stream = RngSpec(config.seed, r)
    spec = config.intervention
    rej_t, rej_rob = [], []
    for effect in config.effect_sizes:
        series = simulate_series(config, effect, stream.child(0))
        fit = ols_fit(build_design(series, spec), series.values, config.alpha)
        rej_t.append(t_test_beta3(fit).reject)
        pre, post = split(series, spec)
        test = bootstrap_null_test(
            pairwise_slopes(pre, Segment.PRE),
            pairwise_slopes(post, Segment.POST),
            config.B,
            stream.child(1),
        )
        rej_rob.append(test.p_two_sided < config.alpha)
    return rej_t, rej_rob


def _run_block(args: tuple[SimConfig, int, int]) -> np.ndarray:
    config, start, stop = args
    out = np.zeros((2, len(config.effect_sizes)), dtype=np.int64)
    for r in range(start, stop):
        rt, rr = _replication(config, r)
        out[0] += rt
        out[1] += rr
    return out


def estimate_power(config: SimConfig, workers: int = 1) -> PowerGrid:
    """Rejection rates of both tests at every effect size in ``config``."""
    if config.R < 100:
        raise InvalidConfig(f"R must be at least 100, got {config.R}")
    if config.B < 100:
        raise InvalidConfig(f"B must be at least 100, got {config.B}")
    workers = max(1, int(workers))
    n_blocks = workers * 4 if workers > 1 else 1
    edges = np.linspace(0, config.R, n_blocks + 1).astype(int)
    blocks = [(config, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if workers == 1:
        parts = [_run_block(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_block, blocks))
    counts = np.sum(parts, axis=0)
    rows = tuple(
        PowerRow(
            effect=e,
            power_t=int(counts[0, i]) / config.R,
            power_robust=int(counts[1, i]) / config.R,
            rejections_t=int(counts[0, i]),
            rejections_robust=int(counts[1, i]),
        )
        for i, e in enumerate(config.effect_sizes)
    )
    return PowerGrid(rows, config)


def with_effects(config: SimConfig, effects) -> SimConfig:
    return replace(config, effect_sizes=tuple(effects))
