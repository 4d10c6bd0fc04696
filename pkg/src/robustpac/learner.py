"""Linear soft-margin learner and error measures.

``learn`` minimizes

    reg/2 * ||w||^2 + sum_i v_i * max(0, 1 - y_i (w.x_i + b)) / sum_i v_i

by seeded mini-batch subgradient descent with a decreasing step size and
Polyak averaging of the iterates. The offset ``b`` is not regularized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, LinearHypothesis, MajorityHypothesis, WeightedDataset

__all__ = [
    "LearnerConfig",
    "LearnTrace",
    "learn",
    "hinge_objective",
    "error_rate",
    "weighted_error",
]


@dataclass(frozen=True)
class LearnerConfig:
    regularization: float = 1e-3
    epochs: int = 50
    seed: int = 0
    weighting: str = "per-example"
    batch_size: int = 32
    step0: float = 0.5

    def __post_init__(self):
        if not self.regularization > 0:
            raise ValueError("regularization must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if self.weighting not in ("uniform", "per-example"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass
class LearnTrace:
    """Objective of the averaged iterate at the end of every epoch."""

    objective: list[float] = field(default_factory=list)


def hinge_objective(w, b, X, y, v, reg) -> float:
    margins = y * (X @ w + b)
    loss = np.maximum(0.0, 1.0 - margins)
    return 0.5 * reg * float(w @ w) + float(v @ loss) / float(v.sum())


def learn(data: Dataset, weights=None, cfg: LearnerConfig | None = None,
          trace: LearnTrace | None = None) -> LinearHypothesis:
    """Fit a linear separator to ``data`` (optionally weighted).

    A single-class dataset yields the constant classifier for that class
    (``constant=True`` on the result).
    """
    cfg = cfg or LearnerConfig()
    n = len(data)
    if n == 0:
        raise ValueError("cannot learn from an empty dataset")
    X, y = data.X, data.y.astype(float)
    if weights is None or cfg.weighting == "uniform":
        v = np.ones(n)
    else:
        v = np.asarray(weights, dtype=float)
        if v.shape != (n,) or not np.all(v > 0):
            raise ValueError("weights must be positive, one per example")
    if np.all(y == y[0]):
        return LinearHypothesis(np.zeros(data.p), float(y[0]), constant=True)

    v = v * (n / v.sum())
    reg = cfg.regularization
    rng = np.random.default_rng(cfg.seed)
    B = min(cfg.batch_size, n)
    # step size eta_t = eta0 / (1 + eta0 * reg * t), eta0 scaled to the data
    eta0 = cfg.step0 / max(1.0, float(np.mean(np.einsum("ij,ij->i", X, X))))

    w = np.zeros(data.p)
    b = 0.0
    w_avg = np.zeros(data.p)
    b_avg = 0.0
    t = 0
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, B):
            idx = order[start:start + B]
            Xb, yb, vb = X[idx], y[idx], v[idx]
            active = yb * (Xb @ w + b) < 1.0
            coef = (vb * yb)[active]
            eta = eta0 / (1.0 + eta0 * reg * t)
            w = (1.0 - eta * reg) * w + (eta / len(idx)) * (coef @ Xb[active])
            b = b + (eta / len(idx)) * coef.sum()
            t += 1
            w_avg += (w - w_avg) / t
            b_avg += (b - b_avg) / t
        if trace is not None:
            trace.objective.append(hinge_objective(w_avg, b_avg, X, y, v, reg))
    return LinearHypothesis(w_avg, b_avg)


def _predict(h, X) -> np.ndarray:
    if isinstance(h, (LinearHypothesis, MajorityHypothesis)):
        return h.predict(X)
    raise TypeError(f"not a hypothesis: {type(h).__name__}")


def error_rate(h, data: Dataset) -> float:
    if len(data) == 0:
        raise ValueError("error rate of an empty dataset is undefined")
    return float(np.mean(_predict(h, data.X) != data.y))


def weighted_error(h, wdata: WeightedDataset) -> float:
    """Fraction of total weight carried by misclassified examples."""
    if len(wdata) == 0:
        raise ValueError("weighted error of an empty dataset is undefined")
    wrong = _predict(h, wdata.data.X) != wdata.data.y
    w = wdata.weights
    return float(w[wrong].sum() / w.sum())
