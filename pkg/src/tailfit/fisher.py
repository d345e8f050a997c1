"""Analytic Fisher information matrices and the asymptotic MLE covariance.

All matrices are evaluated from closed forms at the model's parameters; the
support shift T never enters (the shifted families carry the base family's
information).  `mc_score_information` is the independent Monte-Carlo oracle:
it averages outer products of finite-difference score vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import SeverityModel, log_pdf, sample
from .special_functions import digamma, trigamma

__all__ = [
    "InfoMatrix",
    "SingularInformation",
    "fisher_information",
    "asymptotic_covariance",
    "mc_score_information",
]

_EULER_GAMMA = 0.5772156649015329


class SingularInformation(Exception):
    """Cholesky failed: Theorem-style normal approximations do not apply."""


@dataclass
class InfoMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if not np.allclose(self.entries, self.entries.T, rtol=0, atol=0):
            raise ValueError("information matrix must be exactly symmetric")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def fisher_information(model: SeverityModel) -> InfoMatrix:
    fam, th = model.family, model.params
    if fam == "pareto":
        (alpha,) = th
        return InfoMatrix(np.array([[1.0 / alpha**2]]))
    if fam == "weibull":
        a, b = th
        psi1 = math.pi**2 / 6.0          # psi'(1)
        psi2 = 1.0 - _EULER_GAMMA        # psi(2)
        off = -(1.0 + (-_EULER_GAMMA)) / b   # -(1 + psi(1)) / b
        return InfoMatrix(np.array([
            [(psi1 + psi2**2) / a**2, off],
            [off, a**2 / b**2],
        ]))
    if fam == "lognormal":
        _, sigma = th
        return InfoMatrix(np.diag([1.0 / sigma**2, 2.0 / sigma**2]))
    if fam == "loglogistic":
        a, s = th
        return InfoMatrix(np.diag([(3.0 + math.pi**2) / (9.0 * a**2),
                                   (a / s) ** 2 / 3.0]))
    # gb2: with w = (y/b)^a / (1 + (y/b)^a) ~ Beta(p, q), the scores are
    #   d/da = (1/a)(1 + R (p - (p+q) w)),  R = ln(w / (1-w))
    #   d/db = (a/b)((p+q) w - p)
    #   d/dp = ln w - psi(p) + psi(p+q),  d/dq = ln(1-w) - psi(q) + psi(p+q)
    # and the entries below are the exact Beta moments of their products.
    a, b, p, q = th
    dp, dq = digamma(p), digamma(q)
    dp1, dq1 = digamma(p + 1.0), digamma(q + 1.0)
    tp, tq, tpq = trigamma(p), trigamma(q), trigamma(p + q)
    tp1, tq1 = trigamma(p + 1.0), trigamma(q + 1.0)
    i11 = (1.0 + p * q / (p + q + 1.0) * (tp1 + tq1 + (dp1 - dq1) ** 2)) / a**2
    i12 = -p * q * (dp1 - dq1) / (b * (p + q + 1.0))
    i13 = (1.0 - q * (dp - dq)) / (a * (p + q))
    i14 = (1.0 + p * (dp - dq)) / (a * (p + q))
    i22 = a**2 * p * q / (b**2 * (p + q + 1.0))
    i23 = a * q / (b * (p + q))
    i24 = -a * p / (b * (p + q))
    i33 = tp - tpq
    i34 = -tpq
    i44 = tq - tpq
    return InfoMatrix(np.array([
        [i11, i12, i13, i14],
        [i12, i22, i23, i24],
        [i13, i23, i33, i34],
        [i14, i24, i34, i44],
    ]))


def asymptotic_covariance(model: SeverityModel, n: int) -> np.ndarray:
    """I(theta)^{-1} / n via Cholesky; raises SingularInformation when the
    information matrix is not positive-definite."""
    info = fisher_information(model).entries
    try:
        chol = np.linalg.cholesky(info)
    except np.linalg.LinAlgError as exc:
        raise SingularInformation(str(exc)) from exc
    k = info.shape[0]
    # invert via the factor: solve L L^T X = I
    linv = np.linalg.solve(chol, np.eye(k))
    return (linv.T @ linv) / n


def mc_score_information(model: SeverityModel, draws: int, rng: np.random.Generator) -> InfoMatrix:
    """Monte-Carlo estimate of E[score score^T] with central-difference scores
    (step 1e-5 * max(1, |theta_j|) per coordinate)."""
    xs = sample(model, draws, rng)
    theta = np.asarray(model.params)
    k = theta.size
    scores = np.empty((draws, k))
    for j in range(k):
        h = 1e-5 * max(1.0, abs(theta[j]))
        up = theta.copy()
        up[j] += h
        dn = theta.copy()
        dn[j] -= h
        lp_up = log_pdf(model.replace_params(up), xs)
        lp_dn = log_pdf(model.replace_params(dn), xs)
        scores[:, j] = (lp_up - lp_dn) / (2.0 * h)
    info = scores.T @ scores / draws
    return InfoMatrix(0.5 * (info + info.T))
