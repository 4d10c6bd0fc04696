"""Noisy example oracles POS^lambda / NEG^lambda and synthetic tasks.

Every request to an oracle flips an independent coin: with probability
``1 - lam`` the example is a genuine draw from the class distribution, with
probability ``lam`` the adversary supplies it instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset

__all__ = [
    "AdversaryStrategy",
    "GaussianNoise",
    "LabelFlip",
    "MarginAttack",
    "make_adversary",
    "GaussianMixtureTask",
    "OracleConfig",
    "make_task",
    "draw_pos",
    "draw_neg",
    "draw_labeled_sample",
    "inject_outliers",
]


class AdversaryStrategy:
    """Produces the examples returned on the malicious branch of an oracle.

    ``produce`` receives the label the oracle is nominally serving (+1 for
    POS, -1 for NEG) and may use the task to build its examples.
    """

    tag = "abstract"

    def produce(self, task: "GaussianMixtureTask", label: int, n: int, rng: np.random.Generator):
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianNoise(AdversaryStrategy):
    """Features from N(0, scale^2 I_p) with a uniformly random label."""

    scale: float = 1.0
    tag = "gaussian-noise"

    def produce(self, task, label, n, rng):
        X = self.scale * rng.standard_normal((n, task.p))
        y = rng.choice(np.array([-1, 1]), size=n)
        return X, y


@dataclass(frozen=True)
class LabelFlip(AdversaryStrategy):
    """A genuine draw from the requested class, returned with the wrong label."""

    tag = "label-flip"

    def produce(self, task, label, n, rng):
        return task.sample(label, n, rng), np.full(n, -label)


@dataclass(frozen=True)
class MarginAttack(AdversaryStrategy):
    """A draw from the opposite class labeled as the requested class."""

    tag = "margin-attack"

    def produce(self, task, label, n, rng):
        return task.sample(-label, n, rng), np.full(n, label)


_ADVERSARIES = {cls.tag: cls for cls in (GaussianNoise, LabelFlip, MarginAttack)}


def make_adversary(tag: str, **params) -> AdversaryStrategy:
    try:
        return _ADVERSARIES[tag](**params)
    except KeyError:
        raise ValueError(f"unknown adversary {tag!r}; expected one of {sorted(_ADVERSARIES)}") from None


@dataclass(frozen=True, eq=False)
class GaussianMixtureTask:
    """Two diagonal Gaussians N(mu1, diag(sigma1^2)) and N(-mu1, diag(sigma2^2)).

    ``sigma1``/``sigma2`` are standard deviations per coordinate. Class +1
    draws from the first component.
    """

    mu1: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    separation: float

    def __post_init__(self):
        for name in ("mu1", "sigma1", "sigma2"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if not (self.mu1.shape == self.sigma1.shape == self.sigma2.shape):
            raise ValueError("mean and deviation vectors must share a dimension")
        if not (np.all(self.sigma1 > 0) and np.all(self.sigma2 > 0)):
            raise ValueError("diagonal covariance entries must be positive")

    @property
    def mu2(self) -> np.ndarray:
        return -self.mu1

    @property
    def p(self) -> int:
        return self.mu1.shape[0]

    def sample(self, label: int, n: int, rng: np.random.Generator) -> np.ndarray:
        if label == 1:
            mu, sd = self.mu1, self.sigma1
        else:
            mu, sd = self.mu2, self.sigma2
        return mu + sd * rng.standard_normal((n, self.p))

    def __eq__(self, other):
        if not isinstance(other, GaussianMixtureTask):
            return NotImplemented
        return (
            np.array_equal(self.mu1, other.mu1)
            and np.array_equal(self.sigma1, other.sigma1)
            and np.array_equal(self.sigma2, other.sigma2)
            and self.separation == other.separation
        )


def make_task(p: int, separation: float = 6.0, seed: int = 0,
              sigma_range: tuple[float, float] = (0.5, 1.5)) -> GaussianMixtureTask:
    """Random well-separated two-Gaussian task.

    The standard deviations are uniform in ``sigma_range``; the mean
    direction is a uniformly random unit vector scaled so that
    ``||mu1 - mu2|| = separation * max standard deviation``.
    """
    if p < 1:
        raise ValueError("dimension p must be >= 1")
    if not separation > 0:
        raise ValueError("separation must be positive")
    rng = np.random.default_rng(seed)
    sigma1 = rng.uniform(*sigma_range, size=p)
    sigma2 = rng.uniform(*sigma_range, size=p)
    direction = rng.standard_normal(p)
    direction /= np.linalg.norm(direction)
    smax = max(sigma1.max(), sigma2.max())
    mu1 = direction * (separation * smax / 2.0)
    return GaussianMixtureTask(mu1, sigma1, sigma2, float(separation))


@dataclass(frozen=True)
class OracleConfig:
    lam: float = 0.0
    adversary: AdversaryStrategy = field(default_factory=GaussianNoise)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.lam < 0.5:
            raise ValueError(f"malicious rate must satisfy 0 <= lam < 1/2, got {self.lam}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _draw(task, cfg, label, n, rng) -> Dataset:
    if n < 0:
        raise ValueError("cannot draw a negative number of examples")
    if rng is None:
        rng = cfg.rng()
    bad = rng.random(n) < cfg.lam
    X = np.empty((n, task.p))
    y = np.full(n, label, dtype=np.int64)
    n_bad = int(bad.sum())
    # genuine and malicious streams use separate child generators so that
    # neither side's draws shift when the other's parameters change
    g_rng, a_rng = rng.spawn(2)
    X[~bad] = task.sample(label, n - n_bad, g_rng)
    if n_bad:
        Xb, yb = cfg.adversary.produce(task, label, n_bad, a_rng)
        X[bad] = Xb
        y[bad] = yb
    return Dataset(X, y, bad, p=task.p)


def draw_pos(task: GaussianMixtureTask, cfg: OracleConfig, n: int,
             rng: np.random.Generator | None = None) -> Dataset:
    """``n`` calls to POS^lam."""
    return _draw(task, cfg, 1, n, rng)


def draw_neg(task: GaussianMixtureTask, cfg: OracleConfig, n: int,
             rng: np.random.Generator | None = None) -> Dataset:
    """``n`` calls to NEG^lam."""
    return _draw(task, cfg, -1, n, rng)


def draw_labeled_sample(task: GaussianMixtureTask, cfg: OracleConfig, n_pos: int, n_neg: int) -> Dataset:
    """POS and NEG draws concatenated and shuffled, all driven by ``cfg.seed``."""
    pos_rng, neg_rng, perm_rng = np.random.default_rng(cfg.seed).spawn(3)
    data = draw_pos(task, cfg, n_pos, pos_rng).concat(draw_neg(task, cfg, n_neg, neg_rng))
    return data.take(perm_rng.permutation(len(data)))


def inject_outliers(data: Dataset, lam: float, rng: np.random.Generator,
                    adversary: AdversaryStrategy | None = None) -> Dataset:
    """Replace each example independently with probability ``lam``.

    Used for fixed (e.g. real-world) datasets where the genuine distribution
    is the empirical one. Only the gaussian-noise adversary is meaningful
    without a generative task; other strategies fall back to resampling a
    genuine row of the needed class.
    """
    if not 0.0 <= lam < 0.5:
        raise ValueError(f"malicious rate must satisfy 0 <= lam < 1/2, got {lam}")
    adversary = adversary or GaussianNoise()
    bad = rng.random(len(data)) < lam
    X, y = data.X.copy(), data.y.copy()
    idx = np.flatnonzero(bad)
    if idx.size:
        if isinstance(adversary, GaussianNoise):
            X[idx] = adversary.scale * rng.standard_normal((idx.size, data.p))
            y[idx] = rng.choice(np.array([-1, 1]), size=idx.size)
        else:
            task = _EmpiricalTask(data)
            for i in idx:
                Xi, yi = adversary.produce(task, int(data.y[i]), 1, rng)
                X[i], y[i] = Xi[0], yi[0]
    return Dataset(X, y, data.outlier | bad, p=data.p)


class _EmpiricalTask:
    def __init__(self, data: Dataset):
        self.data = data
        self.p = data.p

    def sample(self, label, n, rng):
        rows = np.flatnonzero(self.data.y == label)
        if rows.size == 0:
            rows = np.arange(len(self.data))
        return self.data.X[rng.choice(rows, size=n)]
