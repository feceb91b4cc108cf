"""Serial-correlation diagnostics and corrections for the OLS fit.

* Durbin-Watson statistic on OLS residuals.
* Newey-West (Bartlett kernel) HAC standard errors.
* Iterated Prais-Winsten AR(1) feasible GLS.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import DesignMatrix
from .errors import DegenerateResiduals, InvalidLag, SingularDesign, TooFewObservations
from .ols import PERFECT_FIT_RTOL, OlsFit, ols_fit

RHO_BOUND = 0.999


def durbin_watson(residuals) -> float:
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise TooFewObservations("Durbin-Watson needs at least 2 residuals")
    denom = float(e @ e)
    if denom == 0.0:
        raise DegenerateResiduals("all residuals are zero")
    d = np.diff(e)
    return float(d @ d) / denom


def auto_lag(n: int) -> int:
    """Newey-West default bandwidth ``floor(4 (n/100)^(2/9))``."""
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def _matrix(design) -> np.ndarray:
    return design.matrix if isinstance(design, DesignMatrix) else np.asarray(design, float)


def newey_west_cov(design, residuals, lag: int | None = None, df_correction: bool = False) -> np.ndarray:
    """HAC sandwich ``inv(W'W) S inv(W'W)`` with Bartlett weights ``1 - l/(L+1)``.

    ``lag=None`` selects :func:`auto_lag`. With ``df_correction`` the
    result is scaled by ``n / (n - k)``.
    """
    w = _matrix(design)
    e = np.asarray(residuals, dtype=float)
    n, k = w.shape
    if e.shape != (n,):
        raise ValueError(f"residuals have shape {e.shape}, expected ({n},)")
    if np.linalg.matrix_rank(w) < k:
        raise SingularDesign("design matrix is rank deficient")
    L = auto_lag(n) if lag is None else int(lag)
    if not (0 <= L < n):
        raise InvalidLag(f"lag must satisfy 0 <= lag < n={n}, got {lag}")

    u = w * e[:, None]  # score contributions e_t w_t
    s = u.T @ u
    for l in range(1, L + 1):
        weight = 1.0 - l / (L + 1.0)
        g = u[l:].T @ u[:-l]
        s += weight * (g + g.T)
    bread = np.linalg.inv(w.T @ w)
    cov = bread @ s @ bread
    if df_correction:
        cov *= n / (n - k)
    return cov


def newey_west_se(design, residuals, lag: int | None = None, df_correction: bool = False) -> np.ndarray:
    cov = newey_west_cov(design, residuals, lag, df_correction)
    return np.sqrt(np.clip(np.diag(cov), 0.0, None))


@dataclass(frozen=True, eq=False)
class PraisWinsten:
    rho: float
    beta: np.ndarray
    iterations: int
    converged: bool
    fit: OlsFit  # OLS on the transformed data; carries se and CIs

    @property
    def se(self) -> np.ndarray:
        return self.fit.se


def _lag1_rho(e: np.ndarray, scale: float) -> float:
    # residuals at rounding level carry no serial structure
    if float(e @ e) <= e.size * (PERFECT_FIT_RTOL * scale) ** 2:
        return 0.0
    den = float(e[:-1] @ e[:-1])
    if den == 0.0:
        return 0.0
    return float(e[1:] @ e[:-1]) / den


def _clamp(rho: float) -> float:
    if abs(rho) >= RHO_BOUND:
        warnings.warn(f"AR(1) coefficient {rho:.4f} clamped to +/-{RHO_BOUND}", RuntimeWarning, stacklevel=3)
        return math.copysign(RHO_BOUND, rho)
    return rho


def quasi_difference(z: np.ndarray, rho: float) -> np.ndarray:
    """Prais-Winsten transform: first row scaled, later rows quasi-differenced."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    out[0] = math.sqrt(1.0 - rho * rho) * z[0]
    out[1:] = z[1:] - rho * z[:-1]
    return out


def prais_winsten(
    design,
    y,
    tol: float = 1e-6,
    max_iter: int = 100,
    alpha: float = 0.05,
    rho: float | None = None,
) -> PraisWinsten:
    """Iterated Prais-Winsten estimation of the segmented regression.

    Pass ``rho`` to skip estimation and transform with a fixed value.
    Failure to converge is reported through ``converged`` rather than
    raised.
    """
    w = _matrix(design)
    y = np.asarray(y, dtype=float)
    if w.shape[0] < 6:
        raise TooFewObservations("Prais-Winsten needs at least 6 observations")

    scale = float(np.max(np.abs(y)))

    def fit_at(r: float) -> OlsFit:
        return ols_fit(quasi_difference(w, r), quasi_difference(y, r), alpha)

    if rho is not None:
        r = _clamp(float(rho))
        f = fit_at(r)
        return PraisWinsten(r, f.beta, 1, True, f)

    r = _clamp(_lag1_rho(ols_fit(w, y, alpha).residuals, scale))
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        f = fit_at(r)
        r_new = _clamp(_lag1_rho(y - w @ f.beta, scale))
        step = abs(r_new - r)
        r = r_new
        if step <= tol:
            converged = True
            break
    f = fit_at(r)
    return PraisWinsten(r, f.beta, iterations, converged, f)
