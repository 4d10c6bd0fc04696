"""Closed-form complexity bounds evaluated with explicit proof constants.

The lower bounds are asymptotic statements; the numbers returned here plug
in the constants that appear in their proofs (8/15 for the decoding
argument, 8/epsilon for the Chernoff step of the sample-size bound). They
are proof-constant evaluations, not tight constants.

Note the k-machine bounds carry (1 - 2 epsilon) instead of (1 - epsilon):
the symmetrization reduction loses a factor of 2 in epsilon, leaving a gap
to the two-machine bound that is not reconciled here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .mwu import ceil_tol

__all__ = [
    "BoundsQuery",
    "lower_bound_constant",
    "lb_2machine_1round",
    "lb_2machine_tround",
    "lb_kmachine_1round",
    "lb_kmachine_tround",
    "space_lb_online",
    "halfspace_lb",
    "sample_complexity",
    "cc_upper_bound",
    "evaluate_all",
]


def _check_eps_lam(epsilon: float, lam: float) -> None:
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0 <= lam < epsilon:
        raise ValueError(f"lower bounds require 0 <= lam < epsilon (got lam={lam}, epsilon={epsilon})")


def lower_bound_constant(epsilon: float, lam: float) -> float:
    """8 (1 - epsilon) / (15 (1 - lam)), unchecked."""
    return 8.0 * (1.0 - epsilon) / (15.0 * (1.0 - lam))


def lb_2machine_1round(epsilon: float, lam: float, d: float) -> float:
    _check_eps_lam(epsilon, lam)
    if d <= 0:
        raise ValueError("VC-dimension d must be positive")
    return 8.0 * (1.0 - epsilon) * d / (15.0 * (1.0 - lam))


def lb_2machine_tround(epsilon: float, lam: float, d: float, t: int) -> float:
    if t < 1:
        raise ValueError("t must be >= 1")
    return lb_2machine_1round(epsilon, lam, d) / t**2


def lb_kmachine_1round(epsilon: float, lam: float, d: float, k: int) -> float:
    """8 (1 - 2 epsilon) / (15 (1 - lam)) d k; vacuous (0) once epsilon >= 1/2."""
    _check_eps_lam(epsilon, lam)
    if d <= 0:
        raise ValueError("VC-dimension d must be positive")
    if k < 2:
        raise ValueError("k must be >= 2")
    if epsilon >= 0.5:
        return 0.0
    return 8.0 * (1.0 - 2.0 * epsilon) * d * k / (15.0 * (1.0 - lam))


def lb_kmachine_tround(epsilon: float, lam: float, d: float, k: int, t: int) -> float:
    if t < 1:
        raise ValueError("t must be >= 1")
    return lb_kmachine_1round(epsilon, lam, d, k) / t**2


def space_lb_online(epsilon: float, lam: float, d: float, r: int) -> float:
    """Working-storage lower bound for an r-pass streaming learner.

    Carries the two-machine constant through the streaming-to-distributed
    reduction.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    return lb_2machine_1round(epsilon, lam, d) / r


def halfspace_lb(epsilon: float, lam: float, p: int) -> float:
    """One-round two-machine bound for half-spaces in R^p (d = p + 1)."""
    if p < 1:
        raise ValueError("dimension p must be >= 1")
    return lb_2machine_1round(epsilon, lam, p + 1)


def sample_complexity(epsilon: float, delta: float, lam: float, log2_H: float) -> int:
    """ceil( 8/epsilon * (1-lam)/(1-2 lam)^2 * (ln|H| + ln(2/delta)) )."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not 0 <= lam < 0.5:
        raise ValueError("lam must lie in [0, 1/2)")
    if log2_H < 0:
        raise ValueError("log2|H| must be non-negative")
    ln_H = log2_H * math.log(2.0)
    m = 8.0 / epsilon * (1.0 - lam) / (1.0 - 2.0 * lam) ** 2 * (ln_H + math.log(2.0 / delta))
    return ceil_tol(m)


def cc_upper_bound(epsilon: float, delta: float, lam: float, log2_H: float, b: float) -> float:
    """b units per example times the sample size."""
    if b <= 0:
        raise ValueError("bits per example b must be positive")
    return b * sample_complexity(epsilon, delta, lam, log2_H)


@dataclass(frozen=True)
class BoundsQuery:
    epsilon: float
    lam: float = 0.0
    d: int = 1
    t: int = 1
    k: int = 2
    r: int = 1
    log2_H: float = 0.0
    delta: float = 0.1
    b: float = 1.0

    def __post_init__(self):
        _check_eps_lam(self.epsilon, self.lam)
        if min(self.d, self.t, self.r) < 1 or self.k < 2:
            raise ValueError("d, t, r must be >= 1 and k >= 2")
        if not 0 < self.delta < 1 or self.b <= 0 or self.log2_H < 0:
            raise ValueError("need 0 < delta < 1, b > 0, log2|H| >= 0")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def evaluate_all(q: BoundsQuery) -> dict[str, float]:
    """Every bound for one query; the half-space entry uses p = d - 1."""
    out = {
        "lb_2machine_1round": lb_2machine_1round(q.epsilon, q.lam, q.d),
        "lb_2machine_tround": lb_2machine_tround(q.epsilon, q.lam, q.d, q.t),
        "lb_kmachine_1round": lb_kmachine_1round(q.epsilon, q.lam, q.d, q.k),
        "lb_kmachine_tround": lb_kmachine_tround(q.epsilon, q.lam, q.d, q.k, q.t),
        "space_lb_online": space_lb_online(q.epsilon, q.lam, q.d, q.r),
        "sample_complexity": float(sample_complexity(q.epsilon, q.delta, q.lam, q.log2_H)),
        "cc_upper_bound": cc_upper_bound(q.epsilon, q.delta, q.lam, q.log2_H, q.b),
    }
    if q.d >= 2:
        out["halfspace_lb"] = halfspace_lb(q.epsilon, q.lam, q.d - 1)
    return out
