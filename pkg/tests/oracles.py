"""Independent reference computations used by the test-suite.

Nothing here imports the code under test's numerical paths.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from scipy import integrate


def gauss_solve(a: list[list[float]], b: list[float]) -> list[float]:
    """Gaussian elimination with partial pivoting on plain Python floats."""
    n = len(b)
    m = [list(map(float, row)) + [float(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        m[col], m[piv] = m[piv], m[col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for c in range(col, n + 1):
                m[r][c] -= f * m[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        x[r] = (m[r][n] - sum(m[r][c] * x[c] for c in range(r + 1, n))) / m[r][r]
    return x


def normal_equations_beta(w_rows: list[list[float]], y: list[float]) -> list[float]:
    k = len(w_rows[0])
    xtx = [[sum(row[i] * row[j] for row in w_rows) for j in range(k)] for i in range(k)]
    xty = [sum(row[i] * yi for row, yi in zip(w_rows, y)) for i in range(k)]
    return gauss_solve(xtx, xty)


def t_density(x: float, df: float) -> float:
    logc = math.lgamma((df + 1) / 2) - math.lgamma(df / 2) - 0.5 * math.log(df * math.pi)
    return math.exp(logc - (df + 1) / 2 * math.log1p(x * x / df))


def t_cdf_quad(x: float, df: float) -> float:
    """0.5 plus the integral of the density from 0 to |x|, adaptive quadrature."""
    val, _ = integrate.quad(t_density, 0.0, abs(x), args=(df,), epsabs=1e-13, epsrel=1e-13, limit=200)
    return 0.5 + val if x >= 0 else 0.5 - val


def naive_slopes(times, values) -> list[float]:
    out = []
    n = len(times)
    for i in range(n):
        for j in range(i + 1, n):
            out.append((values[j] - values[i]) / (times[j] - times[i]))
    return out


def naive_median(xs) -> float:
    s = sorted(xs)
    n = len(s)
    if n % 2:
        return s[n // 2]
    return (s[n // 2 - 1] + s[n // 2]) / 2


def simple_regression(x, y) -> tuple[float, float]:
    """Intercept and slope of the least-squares line, closed form."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    slope = sxy / sxx
    return my - slope * mx, slope


def _median_of_two_valued(k_high: int, n: int, lo: float, hi: float) -> float:
    """Median of ``n`` values of which ``k_high`` equal ``hi`` and the rest ``lo``."""
    vals = [lo] * (n - k_high) + [hi] * k_high
    return naive_median(vals)


def two_valued_pooled_bootstrap(n1: int, n2: int, pool_lo: int, pool_hi: int, lo: float, hi: float):
    """Exact law of median(W*) - median(V*) under pooled resampling.

    The pool holds ``pool_lo`` copies of ``lo`` and ``pool_hi`` of ``hi``.
    Returns a dict ``value -> probability`` (probabilities as Fractions).
    """
    q = Fraction(pool_hi, pool_lo + pool_hi)

    def binom(n):
        return [math.comb(n, k) * q**k * (1 - q) ** (n - k) for k in range(n + 1)]

    b1, b2 = binom(n1), binom(n2)
    law: dict[float, Fraction] = {}
    for k1, k2 in product(range(n1 + 1), range(n2 + 1)):
        d = _median_of_two_valued(k2, n2, lo, hi) - _median_of_two_valued(k1, n1, lo, hi)
        law[d] = law.get(d, Fraction(0)) + b1[k1] * b2[k2]
    return law


def lag0_sandwich_se(w_rows, e) -> list[float]:
    """sqrt(diag(inv(W'W) (sum e_t^2 w_t w_t') inv(W'W))) by explicit arithmetic."""
    k = len(w_rows[0])
    xtx = [[sum(r[i] * r[j] for r in w_rows) for j in range(k)] for i in range(k)]
    inv_cols = [gauss_solve(xtx, [1.0 if i == c else 0.0 for i in range(k)]) for c in range(k)]
    inv = [[inv_cols[j][i] for j in range(k)] for i in range(k)]
    meat = [[sum(et * et * r[i] * r[j] for r, et in zip(w_rows, e)) for j in range(k)] for i in range(k)]
    tmp = [[sum(inv[i][m] * meat[m][j] for m in range(k)) for j in range(k)] for i in range(k)]
    cov = [[sum(tmp[i][m] * inv[m][j] for m in range(k)) for j in range(k)] for i in range(k)]
    return [math.sqrt(cov[i][i]) for i in range(k)]
