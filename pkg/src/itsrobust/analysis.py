"""Per-group analysis pipeline and report rendering.

Each group is fitted by the standard method (OLS segmented regression with
optional serial-correlation correction) and by the robust method (Theil-Sen
slope change with bootstrap p-value and percentile interval). Errors are
recorded per group and method, so one bad group never aborts the batch.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import __version__
from .autocorr import auto_lag, durbin_watson, newey_west_se, prais_winsten
from .bootstrap import DEFAULT_B, bootstrap_inference
from .core import Coding, InterventionSpec, TimeSeries, build_design, split
from .errors import DegenerateVariance, ItsError
from .ols import ols_fit, t_quantile
from .panel import ANONYMOUS, PanelDataset, log_transform
from .rng import RngSpec
from .robust import Segment, pairwise_slopes

STANDARD = "standard"
ROBUST = "robust"
HAC_CHOICES = ("off", "newey-west", "prais")

# A slope change this small relative to max|y| counts as zero in an exact fit.
_ZERO_EFFECT_RTOL = 1e-9


def percent_change(beta1: float, beta3: float) -> tuple[float, float]:
    """Per-period percent change in a log-linear outcome before and after."""
    return 100.0 * math.expm1(beta1), 100.0 * math.expm1(beta1 + beta3)


@dataclass(frozen=True)
class AnalysisOptions:
    log: bool = False
    B: int = DEFAULT_B
    alpha: float = 0.05
    seed: int = 0
    hac: str = "off"
    hac_lag: int | None = None
    coding: Coding = Coding.CENTERED
    methods: tuple[str, ...] = (STANDARD, ROBUST)
    workers: int = 1

    def __post_init__(self):
        if self.hac not in HAC_CHOICES:
            raise ValueError(f"hac must be one of {HAC_CHOICES}, got {self.hac!r}")


@dataclass
class GroupReport:
    """One row of the report. Field order is the JSON key order."""

    group: str
    n_pre: int | None = None
    n_post: int | None = None
    beta_std: list[float] | None = None
    beta3_std: float | None = None
    se_std: float | None = None
    ci_std: tuple[float, float] | None = None
    significant_std: bool | None = None
    beta3_robust: float | None = None
    p_robust: float | None = None
    ci_robust: tuple[float, float] | None = None
    significant_robust: bool | None = None
    dw: float | None = None
    percent_change_pre: float | None = None
    percent_change_post: float | None = None
    errors: dict[str, str] = field(default_factory=dict)


@dataclass
class AnalysisReport:
    groups: list[GroupReport]
    options: AnalysisOptions
    intervention: InterventionSpec

    @property
    def all_failed(self) -> bool:
        return all(_group_failed(g, self.options) for g in self.groups)

    def metadata(self) -> dict:
        o = self.options
        return {
            "version": __version__,
            "intervention": self.intervention.intervention_time,
            "coding": self.intervention.coding.value,
            "log": o.log,
            "hac": o.hac if o.hac != "newey-west" else f"newey-west:{'auto' if o.hac_lag is None else o.hac_lag}",
            "methods": list(o.methods),
            "B": o.B,
            "alpha": o.alpha,
            "seed": o.seed,
        }

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata(),
            "groups": [_clean(g.__dict__) for g in self.groups],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def _group_failed(g: GroupReport, opts: AnalysisOptions) -> bool:
    return "input" in g.errors or all(m in g.errors for m in opts.methods)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def group_stream(group: str) -> int:
    """Stable 64-bit stream id for a group name."""
    return int.from_bytes(hashlib.sha256(group.encode("utf-8")).digest()[:8], "big")


def _err(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _standard(rep: GroupReport, series: TimeSeries, spec: InterventionSpec, opts: AnalysisOptions) -> None:
    design = build_design(series, spec)
    y = series.values
    fit = ols_fit(design, y, opts.alpha)
    if fit.sigma2_hat > 0:
        rep.dw = durbin_watson(fit.residuals)

    beta = fit.beta
    se = float(fit.se[3])
    df = fit.df
    if opts.hac == "newey-west":
        lag = auto_lag(design.n) if opts.hac_lag is None else opts.hac_lag
        se = float(newey_west_se(design, fit.residuals, lag)[3])
    elif opts.hac == "prais":
        pw = prais_winsten(design, y, alpha=opts.alpha)
        beta = pw.beta
        se = float(pw.se[3])
    b3 = float(beta[3])
    rep.beta_std = [float(b) for b in beta]
    rep.beta3_std = b3
    if opts.log:
        rep.percent_change_pre, rep.percent_change_post = percent_change(float(beta[1]), b3)
    if se == 0.0 and abs(b3) <= _ZERO_EFFECT_RTOL * max(1.0, float(np.max(np.abs(y)))):
        raise DegenerateVariance("exact fit with zero slope change: t statistic is 0/0")
    crit = t_quantile(1.0 - opts.alpha / 2.0, df)
    rep.se_std = se
    rep.ci_std = (b3 - crit * se, b3 + crit * se)
    rep.significant_std = not (rep.ci_std[0] <= 0.0 <= rep.ci_std[1])


def _robust(rep: GroupReport, series: TimeSeries, spec: InterventionSpec, opts: AnalysisOptions) -> None:
    pre, post = split(series, spec)
    res = bootstrap_inference(
        pairwise_slopes(pre, Segment.PRE),
        pairwise_slopes(post, Segment.POST),
        B=opts.B,
        alpha=opts.alpha,
        rng=RngSpec(opts.seed, group_stream(rep.group)),
    )
    rep.beta3_robust = res.beta3_observed
    rep.p_robust = res.p_two_sided
    rep.ci_robust = res.ci
    rep.significant_robust = res.p_two_sided < opts.alpha


def analyze_group(group: str, series: TimeSeries, spec: InterventionSpec, opts: AnalysisOptions) -> GroupReport:
    rep = GroupReport(group)
    try:
        if opts.log:
            series = log_transform(series, group)
        pre, post = split(series, spec)
        rep.n_pre, rep.n_post = len(pre), len(post)
    except ItsError as exc:
        rep.errors["input"] = _err(exc)
        return rep
    steps = {STANDARD: _standard, ROBUST: _robust}
    for method in opts.methods:
        try:
            steps[method](rep, series, spec, opts)
        except (ItsError, np.linalg.LinAlgError) as exc:
            rep.errors[method] = _err(exc)
    return rep


def _analyze_one(args) -> GroupReport:
    return analyze_group(*args)


def analyze(dataset: PanelDataset, spec: InterventionSpec, options: AnalysisOptions | None = None) -> AnalysisReport:
    """Run the configured methods on every group, in sorted group order."""
    opts = options or AnalysisOptions()
    jobs = [(g, s, spec, opts) for g, s in dataset]
    if opts.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as ex:
            reports = list(ex.map(_analyze_one, jobs))
    else:
        reports = [_analyze_one(j) for j in jobs]
    return AnalysisReport(reports, opts, spec)


# ---------------------------------------------------------------- rendering

def _f(x: float | None, nd: int = 3) -> str:
    return "NA" if x is None else f"{x:.{nd}f}"


def _ci(ci: tuple[float, float] | None, nd: int = 3) -> str:
    return "NA" if ci is None else f"({ci[0]:.{nd}f}, {ci[1]:.{nd}f})"


def _dw_band(dw: float | None) -> str:
    if dw is None:
        return " "
    if dw < 1.5:
        return "+"
    if dw > 2.5:
        return "-"
    return " "


def _label(group: str) -> str:
    return group if group != ANONYMOUS else "(series)"


def render_text(report: AnalysisReport) -> str:
    opts = report.options
    level = f"{100 * (1 - opts.alpha):g}%"
    width = max([8] + [len(_label(g.group)) for g in report.groups])
    out: list[str] = []
    if STANDARD in opts.methods:
        out.append(f"Standard method: slope change (hac={report.metadata()['hac']})")
        out.append(f"{'group':<{width}}  {'beta3':>9}  {'se':>8}  {level + ' CI':>20}  {'DW':>6}")
        for g in report.groups:
            if STANDARD in g.errors or "input" in g.errors:
                out.append(f"{_label(g.group):<{width}}  error: {g.errors.get(STANDARD) or g.errors['input']}")
                continue
            mark = "**" if g.significant_std else "  "
            out.append(
                f"{_label(g.group):<{width}}  {_f(g.beta3_std):>7}{mark}  {_f(g.se_std, 4):>8}  "
                f"{_ci(g.ci_std):>20}  {_f(g.dw, 2):>6}{_dw_band(g.dw)}"
            )
        out.append("")
    if ROBUST in opts.methods:
        out.append(f"Robust method: slope change (B={opts.B}, seed={opts.seed})")
        out.append(f"{'group':<{width}}  {'beta3':>9}  {'p-value':>8}  {level + ' CI':>20}")
        for g in report.groups:
            if ROBUST in g.errors or "input" in g.errors:
                out.append(f"{_label(g.group):<{width}}  error: {g.errors.get(ROBUST) or g.errors['input']}")
                continue
            mark = "**" if g.significant_robust else "  "
            out.append(
                f"{_label(g.group):<{width}}  {_f(g.beta3_robust):>7}{mark}  {_f(g.p_robust):>8}  "
                f"{_ci(g.ci_robust):>20}"
            )
        out.append("")
    if opts.log and STANDARD in opts.methods:
        out.append("Percent change per period (standard fit)")
        out.append(f"{'group':<{width}}  {'pre %':>8}  {'post %':>8}")
        for g in report.groups:
            if g.percent_change_pre is not None:
                out.append(
                    f"{_label(g.group):<{width}}  {_f(g.percent_change_pre, 2):>8}  {_f(g.percent_change_post, 2):>8}"
                )
        out.append("")
    out.append("** significant at alpha = " + f"{opts.alpha:g}")
    if STANDARD in opts.methods:
        out.append("DW + below 1.5 suggests positive, - above 2.5 negative autocorrelation (heuristic bands)")
    return "\n".join(out) + "\n"


CSV_COLUMNS = (
    "group", "n_pre", "n_post",
    "beta3_std", "se_std", "ci_std_lo", "ci_std_hi", "significant_std",
    "beta3_robust", "p_robust", "ci_robust_lo", "ci_robust_hi", "significant_robust",
    "dw", "percent_change_pre", "percent_change_post", "errors",
)


def render_csv(report: AnalysisReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        return str(v)

    for g in report.groups:
        lo_s, hi_s = g.ci_std or (None, None)
        lo_r, hi_r = g.ci_robust or (None, None)
        row = [
            g.group, g.n_pre, g.n_post,
            g.beta3_std, g.se_std, lo_s, hi_s, g.significant_std,
            g.beta3_robust, g.p_robust, lo_r, hi_r, g.significant_robust,
            g.dw, g.percent_change_pre, g.percent_change_post,
            "; ".join(f"{k}: {v}" for k, v in g.errors.items()),
        ]
        w.writerow([cell(v) for v in row])
    return buf.getvalue()


def render(report: AnalysisReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return render_csv(report)
    return render_text(report)


def iter_errors(report: AnalysisReport) -> Iterable[tuple[str, str, str]]:
    for g in report.groups:
        for method, msg in g.errors.items():
            yield g.group, method, msg
