"""Parametric bootstrap engine: sample n points from theta*, refit, repeat.

Each replication draws from its own counter-based Philox stream keyed by
(seed, replication index), so results are bit-identical for any worker count
and any chunking of the replication range.  Non-convergent replications are
dropped and counted, never imputed.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import mle
from .distributions import PARAM_NAMES, SeverityModel, sample
from .mle import FitError, FitResult

__all__ = [
    "TooFewConverged",
    "BootstrapMatrix",
    "replication_rng",
    "run_bootstrap",
    "TrueModel",
    "true_model_from_losses",
]


class TooFewConverged(Exception):
    """Fewer than half the requested replications produced an estimate."""


@dataclass
class BootstrapMatrix:
    family: str
    true_params: tuple[float, ...]
    threshold: float
    n: int
    m_requested: int
    m_converged: int
    rows: np.ndarray  # (m_converged, k), replication order preserved
    seed: int

    @property
    def param_names(self) -> tuple[str, ...]:
        return PARAM_NAMES[self.family]

    def true_model(self) -> SeverityModel:
        return SeverityModel(self.family, self.true_params, self.threshold)

    def write(self, path_base: Path, extra_meta: dict | None = None) -> None:
        """`<base>.csv` (header = param names, one row per converged
        replication) plus a `<base>.json` sidecar."""
        path_base = Path(path_base)
        lines = [",".join(self.param_names)]
        for row in self.rows:
            lines.append(",".join(repr(float(v)) for v in row))
        # append the suffix (with_suffix would clobber dots inside the name)
        path_base.parent.joinpath(path_base.name + ".csv").write_text("\n".join(lines) + "\n")
        meta = {
            "family": self.family,
            "true_params": list(self.true_params),
            "threshold": self.threshold,
            "n": self.n,
            "m_requested": self.m_requested,
            "m_converged": self.m_converged,
            "seed": self.seed,
        }
        if extra_meta:
            meta.update(extra_meta)
        path_base.parent.joinpath(path_base.name + ".json").write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path_base: Path) -> "BootstrapMatrix":
        path_base = Path(path_base)
        meta = json.loads(path_base.parent.joinpath(path_base.name + ".json").read_text())
        text = path_base.parent.joinpath(path_base.name + ".csv").read_text().strip().splitlines()
        rows = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
        if rows.size == 0:
            rows = rows.reshape(0, len(text[0].split(",")))
        return cls(
            family=meta["family"],
            true_params=tuple(meta["true_params"]),
            threshold=meta["threshold"],
            n=meta["n"],
            m_requested=meta["m_requested"],
            m_converged=meta["m_converged"],
            rows=rows,
            seed=meta["seed"],
        )


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """The stream owned by replication `rep` of a run keyed by `seed`."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(rep,)))
    )


def _fit_replication(model: SeverityModel, n: int, seed: int, rep: int):
    rng = replication_rng(seed, rep)
    xs = sample(model, n, rng)
    try:
        result: FitResult = mle.fit(model.family, xs, model.threshold)
    except FitError:
        return None
    if not result.converged:
        return None
    return result.model.params


def _run_chunk(args):
    model, n, seed, lo, hi = args
    return [_fit_replication(model, n, seed, rep) for rep in range(lo, hi)]


def run_bootstrap(
    model: SeverityModel,
    n: int,
    m: int,
    seed: int,
    workers: int = 1,
) -> BootstrapMatrix:
    """m sample-and-refit replications of size n from `model` (theta*)."""
    if workers <= 1:
        outcomes = _run_chunk((model, n, seed, 0, m))
    else:
        bounds = np.linspace(0, m, 4 * workers + 1, dtype=int)
        tasks = [(model, n, seed, int(lo), int(hi))
                 for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        outcomes = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_chunk, tasks):
                outcomes.extend(chunk)

    rows = [params for params in outcomes if params is not None]
    k = len(PARAM_NAMES[model.family])
    matrix = np.array(rows, dtype=float).reshape(len(rows), k)
    bm = BootstrapMatrix(
        family=model.family,
        true_params=model.params,
        threshold=model.threshold,
        n=n,
        m_requested=m,
        m_converged=len(rows),
        rows=matrix,
        seed=seed,
    )
    if bm.m_converged < 0.5 * m:
        raise TooFewConverged(
            f"{model.family} at n={n}: only {bm.m_converged}/{m} replications converged"
        )
    return bm


@dataclass
class TrueModel:
    """theta* fitted to real (or synthetic) losses, with exclusion accounting."""

    fit: FitResult
    n_tail: int
    n_excluded: int

    @property
    def model(self) -> SeverityModel:
        return self.fit.model


def true_model_from_losses(family: str, losses, T: float) -> TrueModel:
    """Fit `family` to the tail of `losses`: x >= T for Pareto (its support
    includes T), x > T for the shifted families."""
    losses = np.asarray(losses, dtype=float)
    if family == "pareto":
        tail = losses[losses >= T]
    else:
        tail = losses[losses > T]
    result = mle.fit(family, tail, T)
    return TrueModel(fit=result, n_tail=tail.size, n_excluded=losses.size - tail.size)
