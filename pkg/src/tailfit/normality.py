"""Normality tests applied to bootstrapped parameter matrices.

Anderson-Darling (mean and variance estimated from the sample) for the
one-parameter Pareto column; Mardia skewness/kurtosis for the multivariate
families.  p-values below 1e-15 are reported as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapMatrix
from .mle import DegenerateSample
from .special_functions import regularized_gamma_upper, std_normal_cdf

__all__ = [
    "SingularCovariance",
    "NormalityReport",
    "anderson_darling_normal",
    "mardia",
    "normality_suite",
]

_P_FLOOR = 1e-15


class SingularCovariance(Exception):
    pass


@dataclass
class NormalityReport:
    family: str
    n: int
    test: str  # AndersonDarling | MardiaSkew | MardiaKurtosis
    statistic: float
    p_value: float
    m_used: int


def _clip_p(p: float) -> float:
    if p < _P_FLOOR:
        return 0.0
    return min(p, 1.0)


def _ad_p_value(a2_star: float) -> float:
    """Four-piece exponential approximation for the estimated-parameters case."""
    z = a2_star
    if z >= 6.0:
        # the quadratic piece is only valid for moderate z; p is below the
        # reporting floor here anyway
        return 0.0
    if z >= 0.6:
        return math.exp(1.2937 - 5.709 * z + 0.0186 * z * z)
    if z > 0.34:
        return math.exp(0.9177 - 4.279 * z - 1.38 * z * z)
    if z > 0.2:
        return 1.0 - math.exp(-8.318 + 42.796 * z - 59.938 * z * z)
    return 1.0 - math.exp(-13.436 + 101.14 * z - 223.73 * z * z)


def anderson_darling_normal(xs, family: str = "", n: int = 0) -> NormalityReport:
    """A-D statistic with the small-sample factor (1 + 0.75/m + 2.25/m^2)."""
    xs = np.asarray(xs, dtype=float)
    m = xs.size
    if m < 8:
        raise ValueError("anderson_darling_normal needs at least 8 observations")
    sd = float(np.std(xs, ddof=1))
    if sd == 0.0:
        raise DegenerateSample("constant sample")
    z = np.sort((xs - np.mean(xs)) / sd)
    log_cdf = np.array([math.log(max(std_normal_cdf(v), 1e-300)) for v in z])
    log_sf = np.array([math.log(max(std_normal_cdf(-v), 1e-300)) for v in z])
    i = np.arange(1, m + 1)
    a2 = -m - float(np.sum((2 * i - 1) * (log_cdf + log_sf[::-1]))) / m
    a2_star = a2 * (1.0 + 0.75 / m + 2.25 / m**2)
    return NormalityReport(family, n, "AndersonDarling", a2_star,
                           _clip_p(_ad_p_value(a2_star)), m)


def mardia_moments(rows: np.ndarray, block: int = 512) -> tuple[float, float]:
    """(b1, b2) from Mahalanobis cross-products; covariance uses divisor m.

    The double sum for b1 runs over fixed-size row blocks so the summation
    order (and hence the float result) does not depend on available memory.
    """
    rows = np.asarray(rows, dtype=float)
    m, k = rows.shape
    centered = rows - rows.mean(axis=0)
    cov = centered.T @ centered / m
    try:
        cov_inv = np.linalg.inv(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(str(exc)) from exc
    half = centered @ cov_inv  # (m, k)
    b1_total = 0.0
    for lo in range(0, m, block):
        g_block = half[lo:lo + block] @ centered.T  # (block, m)
        b1_total += float(np.sum(g_block**3))
    b1 = b1_total / m**2
    g_diag = np.einsum("ij,ij->i", half, centered)
    b2 = float(np.mean(g_diag**2))
    return b1, b2


def mardia(rows) -> tuple[NormalityReport, NormalityReport]:
    """Skewness and kurtosis reports for an (m, k) matrix, k in 2..4."""
    rows = np.asarray(rows, dtype=float)
    m, k = rows.shape
    if m <= k + 1:
        raise ValueError(f"mardia needs m > k + 1, got m={m}, k={k}")
    b1, b2 = mardia_moments(rows)
    skew_stat = m * b1 / 6.0
    df = k * (k + 1) * (k + 2) / 6.0
    skew_p = _clip_p(regularized_gamma_upper(skew_stat / 2.0, df / 2.0))
    kurt_z = (b2 - k * (k + 2)) / math.sqrt(8.0 * k * (k + 2) / m)
    kurt_p = _clip_p(2.0 * std_normal_cdf(-abs(kurt_z)))
    return (
        NormalityReport("", 0, "MardiaSkew", skew_stat, skew_p, m),
        NormalityReport("", 0, "MardiaKurtosis", kurt_z, kurt_p, m),
    )


def normality_suite(bm: BootstrapMatrix) -> list[NormalityReport]:
    """AD on the Pareto column; Mardia skew + kurtosis otherwise."""
    if bm.family == "pareto":
        report = anderson_darling_normal(bm.rows[:, 0], bm.family, bm.n)
        return [report]
    skew, kurt = mardia(bm.rows)
    for report in (skew, kurt):
        report.family = bm.family
        report.n = bm.n
    return [skew, kurt]


def reports_to_csv(reports: list[NormalityReport]) -> str:
    lines = ["family,n,test,statistic,p_value,m_used"]
    for r in reports:
        lines.append(f"{r.family},{r.n},{r.test},{r.statistic!r},{r.p_value!r},{r.m_used}")
    return "\n".join(lines) + "\n"
