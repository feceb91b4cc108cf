"""Classical segmented regression: OLS fit and t-based inference."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg, special

from .core import DesignMatrix
from .errors import (
    DegenerateVariance,
    InvalidAlpha,
    InvalidDf,
    SingularDesign,
    TooFewObservations,
)

# Residuals below this fraction of max|y| are treated as rounding noise.
PERFECT_FIT_RTOL = 1e-12


def t_cdf(x, df: float):
    """Student t distribution function via the regularized incomplete beta.

    ``P(T <= x) = 1 - I_{df/(df+x^2)}(df/2, 1/2) / 2`` for ``x >= 0``; the
    negative half follows by symmetry.
    """
    if not np.isfinite(df) or df < 1:
        raise InvalidDf(f"degrees of freedom must be >= 1, got {df!r}")
    x = np.asarray(x, dtype=float)
    tail = 0.5 * special.betainc(0.5 * df, 0.5, df / (df + x * x))
    out = np.where(x < 0, tail, 1.0 - tail)
    return float(out) if out.ndim == 0 else out


def t_quantile(p: float, df: float) -> float:
    if not np.isfinite(df) or df < 1:
        raise InvalidDf(f"degrees of freedom must be >= 1, got {df!r}")
    return float(special.stdtrit(df, p))


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Result of a segmented-regression OLS fit.

    ``cov`` is ``sigma2_hat * inv(W'W)``; ``ci`` has one ``(lo, hi)`` row per
    coefficient at level ``1 - alpha``. When the fit is exact (``se == 0``)
    the t statistics and p-values are NaN.
    """

    beta: np.ndarray
    sigma2_hat: float
    cov: np.ndarray
    df: int
    se: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    ci: np.ndarray
    alpha: float
    fitted: np.ndarray
    residuals: np.ndarray
    xtx_inv: np.ndarray

    @property
    def rss(self) -> float:
        return float(self.residuals @ self.residuals)


class TTest(NamedTuple):
    t: float
    p_two_sided: float
    reject: bool


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}")


def ols_fit(design: DesignMatrix | np.ndarray, y, alpha: float = 0.05) -> OlsFit:
    """Least-squares fit of the four-column segmented-regression model."""
    _check_alpha(alpha)
    w = design.matrix if isinstance(design, DesignMatrix) else np.asarray(design, float)
    y = np.asarray(y, dtype=float)
    n, k = w.shape
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, expected ({n},)")
    if n < k + 1:
        raise TooFewObservations(f"need at least {k + 1} observations, got {n}")
    if np.linalg.matrix_rank(w) < k:
        raise SingularDesign("design matrix is rank deficient")

    # W = QR, so R is the Cholesky factor of W'W.
    q, r = np.linalg.qr(w)
    beta = linalg.solve_triangular(r, q.T @ y)
    r_inv = linalg.solve_triangular(r, np.eye(k))
    xtx_inv = r_inv @ r_inv.T

    fitted = w @ beta
    resid = y - fitted
    df = n - k
    rss = float(resid @ resid)
    scale = float(np.max(np.abs(y))) if n else 0.0
    if rss <= n * (PERFECT_FIT_RTOL * scale) ** 2:
        rss = 0.0
    sigma2 = rss / df

    cov = sigma2 * xtx_inv
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se > 0, beta / se, np.nan)
    p_values = np.where(np.isnan(t_stats), np.nan, np.minimum(1.0, 2.0 * t_cdf(-np.abs(t_stats), df)))
    crit = t_quantile(1.0 - alpha / 2.0, df)
    ci = np.column_stack([beta - crit * se, beta + crit * se])
    return OlsFit(
        beta=beta,
        sigma2_hat=sigma2,
        cov=cov,
        df=df,
        se=se,
        t_stats=t_stats,
        p_values=p_values,
        ci=ci,
        alpha=alpha,
        fitted=fitted,
        residuals=resid,
        xtx_inv=xtx_inv,
    )


def t_test_beta3(fit: OlsFit, alpha: float | None = None) -> TTest:
    """Two-sided t test of a zero slope change."""
    alpha = fit.alpha if alpha is None else alpha
    _check_alpha(alpha)
    se = fit.se[3]
    if not se > 0:
        raise DegenerateVariance("standard error of the slope change is zero (perfect fit)")
    t = float(fit.beta[3] / se)
    p = min(1.0, 2.0 * t_cdf(-abs(t), fit.df))
    return TTest(t, p, p < alpha)
