"""Executable communication protocols with exact cost accounting.

Machine ids are 0-based: machine 0 is A (two-machine case) or the
coordinator (k-machine case and Naive).
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import CostLedger, Dataset, LinearHypothesis, MajorityHypothesis, Payload
from .learner import LearnerConfig, error_rate, learn
from .mwu import ceil_tol, sample_indices, sample_size
from .streaming import StreamingLearner

__all__ = [
    "C_PROOF",
    "C_LITERAL",
    "rounds_for",
    "c_for",
    "ProtocolConfig",
    "Partition",
    "RoundTrace",
    "WsRun",
    "NaiveRun",
    "EmulationRun",
    "allocate",
    "run_ws_2machine",
    "run_ws_kmachine",
    "run_naive",
    "naive_cost",
    "ws_closed_form_units",
    "emulate_online",
    "run_streaming",
]

C_PROOF = "proof-consistent"
C_LITERAL = "literal"

Learner = Callable[[Dataset, "np.ndarray | None"], LinearHypothesis]


def rounds_for(epsilon: float) -> int:
    """T = ceil(5 log2(1/epsilon))."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return max(1, ceil_tol(5.0 * math.log2(1.0 / epsilon)))


def c_for(lam: float, formula: str = C_PROOF) -> float:
    """Sampling accuracy parameter c as a function of the malicious rate.

    The default keeps the per-round misclassified weight fraction at 0.2
    after accounting for outliers: c = 0.2 (1-2 lam)^2 / (1-lam). The literal
    initialization line of the protocol listing, 0.2 (1-lam)/(1-2 lam)^2, is
    available as ``C_LITERAL``.
    """
    if not 0 <= lam < 0.5:
        raise ValueError("lam must lie in [0, 1/2)")
    if formula == C_PROOF:
        return 0.2 * (1 - 2 * lam) ** 2 / (1 - lam)
    if formula == C_LITERAL:
        return 0.2 * (1 - lam) / (1 - 2 * lam) ** 2
    raise ValueError(f"unknown c formula {formula!r}")


@dataclass(frozen=True)
class ProtocolConfig:
    epsilon: float
    lam: float = 0.0
    rho: float = 0.75
    c_formula: str = C_PROOF
    seed: int = 0
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    cap_sample_to_shard: bool = False

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 <= self.lam < 0.5:
            raise ValueError("lam must lie in [0, 1/2)")
        if not self.lam < self.epsilon:
            raise ValueError(f"malicious rate lam={self.lam} must be below epsilon={self.epsilon}")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if not 0 < self.c < 1:
            raise ValueError(f"c={self.c:.4g} from the {self.c_formula} formula is outside (0, 1)")

    @property
    def T(self) -> int:
        return rounds_for(self.epsilon)

    @property
    def c(self) -> float:
        return c_for(self.lam, self.c_formula)

    def rb_size(self, p: int, n_b: int) -> int:
        s = sample_size(p, self.c)
        return min(s, n_b) if self.cap_sample_to_shard else s


@dataclass(frozen=True)
class Partition:
    shards: tuple[Dataset, ...]

    def __post_init__(self):
        shards = tuple(self.shards)
        if not shards:
            raise ValueError("a partition needs at least one shard")
        if any(s.p != shards[0].p for s in shards):
            raise ValueError("all shards must share the dimension p")
        object.__setattr__(self, "shards", shards)

    @property
    def k(self) -> int:
        return len(self.shards)

    @property
    def p(self) -> int:
        return self.shards[0].p

    def union(self) -> Dataset:
        return self.shards[0].concat(*self.shards[1:])

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, i) -> Dataset:
        return self.shards[i]


@dataclass(frozen=True)
class RoundTrace:
    round: int
    train_error: float
    weighted_miscls_fraction: float
    potential: float
    cumulative_units: int
    misclassified_weight: float
    sample_size: int

    CSV_FIELDS = ("round", "train_error", "weighted_miscls_fraction", "potential", "cumulative_units")

    def csv_row(self) -> tuple:
        return tuple(getattr(self, f) for f in self.CSV_FIELDS)


@dataclass
class WsRun:
    hypothesis: MajorityHypothesis
    ledger: CostLedger
    trace: list[RoundTrace]
    final_weights: np.ndarray
    final_potential: float

    def __iter__(self):
        return iter((self.hypothesis, self.ledger, self.trace))


@dataclass
class NaiveRun:
    hypothesis: LinearHypothesis
    ledger: CostLedger
    sent: tuple[int, ...]

    def __iter__(self):
        return iter((self.hypothesis, self.ledger))


@dataclass
class EmulationRun:
    hypothesis: LinearHypothesis
    ledger: CostLedger
    stream: Dataset

    def __iter__(self):
        return iter((self.hypothesis, self.ledger))


def _default_learner(cfg: LearnerConfig) -> Learner:
    return lambda data, weights: learn(data, weights, cfg)


def _learn_pool(learner: Learner, pool: Dataset, counts: np.ndarray) -> LinearHypothesis:
    # repeated draws enter the pool as multiplicities rather than copies
    keep = np.flatnonzero(counts > 0)
    return learner(pool.take(keep), counts[keep].astype(float))


def run_ws_2machine(X_A: Dataset, X_B: Dataset, cfg: ProtocolConfig,
                    learner: Learner | None = None,
                    rng: np.random.Generator | None = None) -> WsRun:
    """Two-machine Weighted Sampling.

    Each round A learns on its cumulative pool and sends the hypothesis;
    B multiplies the weight of every point it misclassifies by 1 + rho and
    returns a weighted sample of size ``cfg.rb_size``. The output is the
    majority vote of the T hypotheses.
    """
    if X_A.p != X_B.p:
        raise ValueError("both machines must hold data of the same dimension")
    if len(X_A) == 0 or len(X_B) == 0:
        raise ValueError("both machines need at least one example")
    learner = learner or _default_learner(cfg.learner)
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    p, nA = X_A.p, len(X_A)
    D = X_A.concat(X_B)
    counts = np.concatenate([np.ones(nA, dtype=np.int64), np.zeros(len(X_B), dtype=np.int64)])
    w = np.ones(len(X_B))
    size = cfg.rb_size(p, len(X_B))
    ledger = CostLedger(p)
    trace: list[RoundTrace] = []
    members = []
    for t in range(1, cfg.T + 1):
        h = _learn_pool(learner, D, counts)
        members.append(h)
        ledger.charge(t, 0, 1, Payload.hypothesis())

        phi = math.fsum(w)
        wrong = h.predict(X_B.X) != X_B.y
        mis = math.fsum(w[wrong])
        w = np.where(wrong, w * (1.0 + cfg.rho), w)
        idx = sample_indices(w, size, rng)
        np.add.at(counts, nA + idx, 1)
        ledger.charge(t, 1, 0, Payload.batch(size))

        trace.append(RoundTrace(t, error_rate(h, D), mis / phi, phi, ledger.total_units, mis, size))
    return WsRun(MajorityHypothesis(tuple(members)), ledger, trace, w, math.fsum(w))


def allocate(total: int, weights: Sequence[float]) -> list[int]:
    """Split ``total`` proportionally to ``weights`` (largest remainder).

    Sizes sum to ``total`` exactly; remainder ties go to the lower index.
    """
    weights = np.asarray(weights, dtype=float)
    quotas = total * weights / weights.sum()
    sizes = np.floor(quotas).astype(np.int64)
    short = total - int(sizes.sum())
    if short:
        order = np.argsort(-(quotas - sizes), kind="stable")
        sizes[order[:short]] += 1
    return [int(s) for s in sizes]


def run_ws_kmachine(parts: Partition, cfg: ProtocolConfig,
                    learner: Learner | None = None,
                    rng: np.random.Generator | None = None) -> WsRun:
    """Coordinator variant: machine 0 plays A, machines 1..k-1 jointly play B.

    Per round the coordinator learns on its pool and broadcasts the
    hypothesis; every other machine updates its weights, reports its total
    weight, receives its share of the total, and returns a weighted sample of
    its share of |R_B|.
    """
    if parts.k < 2:
        raise ValueError("the coordinator protocol needs k >= 2 machines")
    if any(len(s) == 0 for s in parts.shards):
        raise ValueError("every machine needs at least one example")
    learner = learner or _default_learner(cfg.learner)
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    p, k = parts.p, parts.k
    D = parts.union()
    offsets = np.cumsum([0] + [len(s) for s in parts.shards])
    counts = np.zeros(len(D), dtype=np.int64)
    counts[: offsets[1]] = 1
    weights = [np.ones(len(s)) for s in parts.shards[1:]]
    rngs = rng.spawn(k - 1)
    n_b = sum(len(s) for s in parts.shards[1:])
    size = cfg.rb_size(p, n_b)
    ledger = CostLedger(p)
    trace: list[RoundTrace] = []
    members = []
    for t in range(1, cfg.T + 1):
        h = _learn_pool(learner, D, counts)
        members.append(h)
        for i in range(1, k):
            ledger.charge(t, 0, i, Payload.hypothesis())

        phi = math.fsum(math.fsum(w) for w in weights)
        mis = 0.0
        for j, shard in enumerate(parts.shards[1:]):
            wrong = h.predict(shard.X) != shard.y
            mis += math.fsum(weights[j][wrong])
            weights[j] = np.where(wrong, weights[j] * (1.0 + cfg.rho), weights[j])

        totals = [math.fsum(w) for w in weights]
        for i in range(1, k):
            ledger.charge(t, i, 0, Payload.scalar())
        for i in range(1, k):
            ledger.charge(t, 0, i, Payload.scalar())

        for j, n_j in enumerate(allocate(size, totals)):
            if n_j:
                idx = sample_indices(weights[j], n_j, rngs[j])
                np.add.at(counts, offsets[j + 1] + idx, 1)
            ledger.charge(t, j + 1, 0, Payload.batch(n_j))

        trace.append(RoundTrace(t, error_rate(h, D), mis / phi, phi, ledger.total_units, mis, size))
    final = np.concatenate(weights)
    return WsRun(MajorityHypothesis(tuple(members)), ledger, trace, final, math.fsum(final))


def naive_cost(parts: Partition) -> int:
    """Units spent shipping every non-coordinator shard: sum_{i>=2} (p+1)|X_i|."""
    return sum((parts.p + 1) * len(s) for s in parts.shards[1:])


def ws_closed_form_units(p: int, T: int, size: int) -> int:
    return T * (p + 1) * (1 + size)


def run_naive(parts: Partition, learner: Learner | None = None, sizing: int | None = None,
              rng: np.random.Generator | None = None,
              learner_cfg: LearnerConfig | None = None) -> NaiveRun:
    """Ship shards 1..k-1 to machine 0, which learns once.

    With ``sizing`` each machine sends a uniform subsample (without
    replacement) of at most ``sizing`` examples instead of its whole shard.
    """
    if parts.k < 2:
        raise ValueError("the naive protocol needs k >= 2 machines")
    learner = learner or _default_learner(learner_cfg or LearnerConfig())
    if sizing is not None and rng is None:
        rng = np.random.default_rng(0)
    ledger = CostLedger(parts.p)
    received = [parts.shards[0]]
    sent = []
    for i, shard in enumerate(parts.shards[1:], start=1):
        if sizing is not None and sizing < len(shard):
            shard = shard.take(np.sort(rng.choice(len(shard), size=sizing, replace=False)))
        received.append(shard)
        sent.append(len(shard))
        ledger.charge(1, i, 0, Payload.batch(len(shard)))
    pool = received[0].concat(*received[1:])
    return NaiveRun(learner(pool, None), ledger, tuple(sent))


def run_streaming(sl: StreamingLearner, stream: Dataset, r: int) -> LinearHypothesis:
    """Single-machine reference: r passes of ``sl`` over ``stream``."""
    sl.init()
    for _ in range(r):
        for x, y in zip(stream.X, stream.y):
            sl.observe(x, int(y))
    return sl.finalize()


def emulate_online(sl: StreamingLearner, parts: Partition, r: int,
                   rng: np.random.Generator | None = None) -> EmulationRun:
    """Run an r-pass streaming learner over data spread across k machines.

    Machine i permutes its shard into stream s_i; the machines play the
    learner over <s_1|...|s_k>, passing its state to the next machine
    (cyclically) after each segment, so exactly k * r transfers of
    ``sl.state_units`` units are charged.
    """
    if r < 1:
        raise ValueError("at least one pass is required")
    rng = rng if rng is not None else np.random.default_rng(0)
    k = parts.k
    streams = [s.take(g.permutation(len(s))) for s, g in zip(parts.shards, rng.spawn(k))]
    machines = [copy.deepcopy(sl) for _ in range(k)]
    machines[0].init()
    state = machines[0].get_state()
    ledger = CostLedger(parts.p)
    for pass_no in range(1, r + 1):
        for i, (m, s) in enumerate(zip(machines, streams)):
            m.set_state(state)
            for x, y in zip(s.X, s.y):
                m.observe(x, int(y))
            state = m.get_state()
            ledger.charge(pass_no, i, (i + 1) % k, Payload.state(sl.state_units))
    machines[0].set_state(state)
    return EmulationRun(machines[0].finalize(), ledger, streams[0].concat(*streams[1:]))
