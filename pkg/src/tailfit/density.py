"""Kernel density estimates of bootstrapped parameters overlaid with the
normal density predicted by the asymptotic covariance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapMatrix
from .fisher import asymptotic_covariance
from .mle import DegenerateSample

__all__ = ["DensityOverlay", "silverman_bandwidth", "kde", "overlay"]

_GRID_POINTS = 512
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass
class DensityOverlay:
    family: str
    param_name: str
    n: int
    grid: np.ndarray
    kde: np.ndarray
    normal_pdf: np.ndarray
    bandwidth: float

    def to_csv(self) -> str:
        lines = ["grid,kde,normal_pdf"]
        for g, k, p in zip(self.grid, self.kde, self.normal_pdf):
            lines.append(f"{g!r},{k!r},{p!r}")
        return "\n".join(lines) + "\n"


def silverman_bandwidth(xs: np.ndarray) -> float:
    m = xs.size
    sd = float(np.std(xs, ddof=1))
    q25, q75 = np.quantile(xs, [0.25, 0.75])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0.0 else sd
    if spread <= 0.0:
        raise DegenerateSample("zero-spread sample has no bandwidth")
    return 0.9 * spread * m ** (-0.2)


def kde(xs, grid) -> np.ndarray:
    """Gaussian-kernel density of xs on grid, Silverman bandwidth."""
    xs = np.asarray(xs, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if xs.size < 2:
        raise DegenerateSample("kde needs at least 2 observations")
    h = silverman_bandwidth(xs)
    out = np.empty(grid.size)
    # chunk the grid so the (grid, m) kernel matrix stays small
    for lo in range(0, grid.size, 64):
        z = (grid[lo:lo + 64, None] - xs[None, :]) / h
        out[lo:lo + 64] = np.exp(-0.5 * z * z).sum(axis=1)
    return out / (xs.size * h * _SQRT_2PI)


def overlay(bm: BootstrapMatrix, j: int) -> DensityOverlay:
    """KDE of bootstrap column j vs. N(theta*_j, (I^{-1})_jj / n) on a shared
    512-point grid spanning both."""
    if bm.m_converged < 100:
        raise ValueError(f"need at least 100 converged replications, have {bm.m_converged}")
    col = bm.rows[:, j]
    model = bm.true_model()
    target = model.params[j]
    sd = math.sqrt(asymptotic_covariance(model, bm.n)[j, j])
    lo = min(float(col.min()), target - 4.0 * sd)
    hi = max(float(col.max()), target + 4.0 * sd)
    grid = np.linspace(lo, hi, _GRID_POINTS)
    dens = kde(col, grid)
    z = (grid - target) / sd
    normal_pdf = np.exp(-0.5 * z * z) / (sd * _SQRT_2PI)
    return DensityOverlay(
        family=bm.family,
        param_name=bm.param_names[j],
        n=bm.n,
        grid=grid,
        kde=dens,
        normal_pdf=normal_pdf,
        bandwidth=silverman_bandwidth(col),
    )
