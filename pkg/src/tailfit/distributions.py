"""The five severity families behind one interface.

Pareto lives on [T, inf) with the threshold T as its support edge; the other
four families are shifted: X = T + Y with Y from the base family on (0, inf),
so T = 0 recovers the unshifted distribution.

Parameter order matches the reporting labels:
  pareto       (shape,)
  weibull      (shape, scale)
  lognormal    (meanlog, sdlog)
  loglogistic  (shape, scale)
  gb2          (shape1, scale, shape2, shape3)   i.e. (a, b, p, q)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_functions import (
    inverse_incomplete_beta,
    log_beta,
    regularized_incomplete_beta,
    std_normal_cdf,
    std_normal_quantile,
)

__all__ = [
    "FAMILIES",
    "PARAM_NAMES",
    "SeverityModel",
    "pdf",
    "log_pdf",
    "cdf",
    "quantile",
    "sample",
    "log_likelihood",
]

PARAM_NAMES: dict[str, tuple[str, ...]] = {
    "pareto": ("shape",),
    "weibull": ("shape", "scale"),
    "lognormal": ("meanlog", "sdlog"),
    "loglogistic": ("shape", "scale"),
    "gb2": ("shape1", "scale", "shape2", "shape3"),
}

FAMILIES = tuple(PARAM_NAMES)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _validate(family: str, params: tuple[float, ...], threshold: float) -> None:
    if family not in PARAM_NAMES:
        raise ValueError(f"unknown family {family!r}")
    names = PARAM_NAMES[family]
    if len(params) != len(names):
        raise ValueError(f"{family} expects {len(names)} parameters, got {len(params)}")
    if not all(math.isfinite(p) for p in params):
        raise ValueError(f"{family} parameters must be finite, got {params}")
    if threshold < 0.0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    if family == "pareto":
        if threshold <= 0.0:
            raise ValueError("pareto requires threshold > 0")
        if params[0] <= 0.0:
            raise ValueError("pareto shape must be positive")
    elif family == "lognormal":
        if params[1] <= 0.0:
            raise ValueError("lognormal sdlog must be positive")
    else:
        if any(p <= 0.0 for p in params):
            raise ValueError(f"{family} parameters must be positive, got {params}")


@dataclass(frozen=True)
class SeverityModel:
    """A distribution family tag, a parameter vector, and the support shift T."""

    family: str
    params: tuple[float, ...]
    threshold: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        _validate(self.family, self.params, self.threshold)

    @property
    def param_names(self) -> tuple[str, ...]:
        return PARAM_NAMES[self.family]

    def replace_params(self, params) -> "SeverityModel":
        return SeverityModel(self.family, tuple(params), self.threshold)


def _softplus(t: np.ndarray) -> np.ndarray:
    """log(1 + e^t), overflow-safe."""
    return np.logaddexp(0.0, t)


def log_pdf(model: SeverityModel, x):
    """Log-density at x (scalar or array); -inf outside support."""
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    T = model.threshold
    out = np.full(x.shape, -np.inf)

    if model.family == "pareto":
        (alpha,) = model.params
        ok = x >= T
        xs = x[ok]
        out[ok] = math.log(alpha) + alpha * math.log(T) - (alpha + 1.0) * np.log(xs)
    else:
        ok = x > T
        y = x[ok] - T
        ly = np.log(y)
        if model.family == "weibull":
            a, b = model.params
            t = a * (ly - math.log(b))
            out[ok] = math.log(a) - math.log(b) + (a - 1.0) / a * t - np.exp(t)
        elif model.family == "lognormal":
            mu, sigma = model.params
            z = (ly - mu) / sigma
            out[ok] = -ly - math.log(sigma) - _LOG_SQRT_2PI - 0.5 * z * z
        elif model.family == "loglogistic":
            a, s = model.params
            t = a * (ly - math.log(s))
            out[ok] = math.log(a) + t - ly - 2.0 * _softplus(t)
        else:  # gb2
            a, b, p, q = model.params
            t = a * (ly - math.log(b))
            out[ok] = (math.log(a) + (p - 1.0 / a) * t - math.log(b)
                       - log_beta(p, q) - (p + q) * _softplus(t))
    return float(out) if scalar else out


def pdf(model: SeverityModel, x):
    """Density at x; 0 outside support."""
    return np.exp(log_pdf(model, x))


def cdf(model: SeverityModel, x):
    """Distribution function; 0 at and below the support edge."""
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    T = model.threshold
    out = np.zeros(x.shape)

    if model.family == "pareto":
        (alpha,) = model.params
        ok = x > T
        out[ok] = -np.expm1(alpha * np.log(T / x[ok]))
    else:
        ok = x > T
        y = x[ok] - T
        if model.family == "weibull":
            a, b = model.params
            out[ok] = -np.expm1(-((y / b) ** a))
        elif model.family == "lognormal":
            mu, sigma = model.params
            z = (np.log(y) - mu) / sigma
            out[ok] = np.array([std_normal_cdf(v) for v in z])
        elif model.family == "loglogistic":
            a, s = model.params
            # logistic in log-space: 1 / (1 + (y/s)^{-a})
            out[ok] = 1.0 / (1.0 + np.exp(-a * (np.log(y) - math.log(s))))
        else:  # gb2
            a, b, p, q = model.params
            z = 1.0 / (1.0 + np.exp(-a * (np.log(y) - math.log(b))))
            out[ok] = np.array([regularized_incomplete_beta(v, p, q) for v in z])
    return float(out) if scalar else out


def quantile(model: SeverityModel, u):
    """Inverse CDF; closed forms except GB2 (numeric beta inversion)."""
    scalar = np.isscalar(u)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ValueError("quantile requires 0 < u < 1")
    T = model.threshold

    if model.family == "pareto":
        (alpha,) = model.params
        out = T * (1.0 - u) ** (-1.0 / alpha)
    elif model.family == "weibull":
        a, b = model.params
        out = T + b * (-np.log1p(-u)) ** (1.0 / a)
    elif model.family == "lognormal":
        mu, sigma = model.params
        z = np.array([std_normal_quantile(v) for v in u.ravel()]).reshape(u.shape)
        out = T + np.exp(mu + sigma * z)
    elif model.family == "loglogistic":
        a, s = model.params
        out = T + s * (u / (1.0 - u)) ** (1.0 / a)
    else:  # gb2
        a, b, p, q = model.params
        z = np.array([inverse_incomplete_beta(v, p, q) for v in u.ravel()]).reshape(u.shape)
        out = T + b * (z / (1.0 - z)) ** (1.0 / a)
    return float(out) if scalar else out


def sample(model: SeverityModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws.  The only state touched is the caller's rng."""
    T = model.threshold
    if model.family == "pareto":
        (alpha,) = model.params
        u = rng.random(n)
        return T * (1.0 - u) ** (-1.0 / alpha)
    if model.family == "weibull":
        a, b = model.params
        u = rng.random(n)
        return T + b * (-np.log1p(-u)) ** (1.0 / a)
    if model.family == "lognormal":
        mu, sigma = model.params
        return T + np.exp(mu + sigma * rng.standard_normal(n))
    if model.family == "loglogistic":
        a, s = model.params
        u = rng.random(n)
        return T + s * (u / (1.0 - u)) ** (1.0 / a)
    # gb2 via the Beta-ratio representation: cheaper than inverting I_z in a hot loop
    a, b, p, q = model.params
    gp = rng.standard_gamma(p, n)
    gq = rng.standard_gamma(q, n)
    return T + b * (gp / gq) ** (1.0 / a)


def log_likelihood(model: SeverityModel, xs) -> float:
    """Sum of log_pdf over xs; -inf if any point lies outside the support."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return 0.0
    return float(np.sum(log_pdf(model, xs)))
