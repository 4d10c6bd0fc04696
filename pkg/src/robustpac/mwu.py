"""Multiplicative weight update and weighted resampling of the hard set."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, LinearHypothesis, WeightedDataset

__all__ = [
    "MwuParams",
    "ceil_tol",
    "sample_size",
    "update_weights",
    "sample_RB",
    "sample_indices",
    "compute_potential",
    "mwu_round",
]


def ceil_tol(x: float) -> int:
    """Ceiling that ignores float noise just above an integer (e.g. 250.00000000000003)."""
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


@dataclass(frozen=True)
class MwuParams:
    c: float
    rho: float = 0.75

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if not 0 < self.c < 1:
            raise ValueError("c must lie in (0, 1)")

    def size(self, p: int) -> int:
        return sample_size(p, self.c)


def sample_size(p: int, c: float) -> int:
    """|R_B| = min(ceil((p/c) log2(p/c)), ceil(p/c^2))."""
    if p < 1:
        raise ValueError("dimension p must be >= 1")
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    ratio = p / c
    return min(ceil_tol(ratio * math.log2(ratio)), ceil_tol(p / (c * c)))


def update_weights(wdata: WeightedDataset, h: LinearHypothesis, rho: float = 0.75) -> WeightedDataset:
    """Multiply the weight of every example ``h`` gets wrong by ``1 + rho``."""
    wrong = h.predict(wdata.data.X) != wdata.data.y
    return wdata.with_weights(np.where(wrong, wdata.weights * (1.0 + rho), wdata.weights))


def sample_indices(weights: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` i.i.d. indices drawn with probability proportional to ``weights``."""
    if size < 0:
        raise ValueError("sample size must be non-negative")
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        raise ValueError("cannot sample from an empty set")
    return rng.choice(weights.size, size=size, replace=True, p=weights / weights.sum())


def sample_RB(wdata: WeightedDataset, size: int, rng: np.random.Generator) -> Dataset:
    """Weighted sample with replacement; duplicates are kept."""
    if size < 1:
        raise ValueError("sample size must be >= 1")
    return wdata.data.take(sample_indices(wdata.weights, size, rng))


def compute_potential(wdata: WeightedDataset) -> float:
    return math.fsum(wdata.weights)


def mwu_round(wdata: WeightedDataset, h: LinearHypothesis, params: MwuParams,
              rng: np.random.Generator, size: int | None = None):
    """One call of the MWU subroutine on machine B.

    Returns the updated weights and the indices of the drawn sample.
    """
    updated = update_weights(wdata, h, params.rho)
    if size is None:
        size = params.size(wdata.data.p)
    return updated, sample_indices(updated.weights, size, rng)
