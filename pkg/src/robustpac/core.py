"""Shared domain types and the communication cost ledger.

Costs are counted in vector words: one example or one linear classifier in
R^p costs ``p + 1`` units (p coordinates plus one label/offset word), a scalar
costs a single unit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Provenance",
    "Example",
    "Dataset",
    "WeightedDataset",
    "LinearHypothesis",
    "MajorityHypothesis",
    "Payload",
    "LedgerEntry",
    "CostLedger",
    "predict",
    "majority_predict",
    "charge",
]


class Provenance(str, enum.Enum):
    GENUINE = "genuine"
    OUTLIER = "outlier"


@dataclass(frozen=True)
class Example:
    features: np.ndarray
    label: int
    provenance: Provenance = Provenance.GENUINE

    def __post_init__(self):
        x = np.asarray(self.features, dtype=float)
        if x.ndim != 1 or not np.all(np.isfinite(x)):
            raise ValueError("features must be a finite 1-d vector")
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label!r}")
        x.setflags(write=False)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "provenance", Provenance(self.provenance))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Dataset:
    """Ordered labeled examples stored column-wise.

    ``X`` is (n, p), ``y`` holds labels in {-1, +1} and ``outlier`` the hidden
    provenance flags. Learners and protocols only ever read ``X`` and ``y``.
    """

    __slots__ = ("X", "y", "outlier")

    def __init__(self, X, y, outlier=None, p: int | None = None):
        X = np.array(X, dtype=float)
        if X.ndim == 1 and X.size == 0:
            if p is None:
                raise ValueError("dimension p is required for an empty dataset")
            X = X.reshape(0, p)
        if X.ndim != 2:
            raise ValueError("X must be two-dimensional")
        if p is not None and X.shape[1] != p:
            raise ValueError(f"feature dimension {X.shape[1]} != p={p}")
        if X.shape[1] < 1:
            raise ValueError("dimension p must be positive")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        y = np.array(y, dtype=np.int64).reshape(-1)
        if y.shape[0] != X.shape[0]:
            raise ValueError("X and y lengths differ")
        if not np.all((y == 1) | (y == -1)):
            raise ValueError("labels must be -1 or +1")
        if outlier is None:
            outlier = np.zeros(len(y), dtype=bool)
        outlier = np.array(outlier, dtype=bool).reshape(-1)
        if outlier.shape[0] != len(y):
            raise ValueError("provenance flags length differs from y")
        self.X = _frozen(X)
        self.y = _frozen(y)
        self.outlier = _frozen(outlier)

    @classmethod
    def from_examples(cls, examples: Sequence[Example], p: int | None = None) -> "Dataset":
        if not examples:
            if p is None:
                raise ValueError("dimension p is required for an empty dataset")
            return cls.empty(p)
        X = np.stack([e.features for e in examples])
        y = [e.label for e in examples]
        outlier = [e.provenance is Provenance.OUTLIER for e in examples]
        return cls(X, y, outlier, p=p)

    @classmethod
    def empty(cls, p: int) -> "Dataset":
        return cls(np.zeros((0, p)), [], p=p)

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.X.shape[0]

    def __getitem__(self, i: int) -> Example:
        prov = Provenance.OUTLIER if self.outlier[i] else Provenance.GENUINE
        return Example(self.X[i], int(self.y[i]), prov)

    def __iter__(self) -> Iterator[Example]:
        for i in range(len(self)):
            yield self[i]

    @property
    def examples(self) -> list[Example]:
        return list(self)

    def take(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.X[idx], self.y[idx], self.outlier[idx], p=self.p)

    def concat(self, *others: "Dataset") -> "Dataset":
        parts = (self,) + others
        if any(d.p != self.p for d in parts):
            raise ValueError("cannot concatenate datasets of different dimension")
        return Dataset(
            np.concatenate([d.X for d in parts]),
            np.concatenate([d.y for d in parts]),
            np.concatenate([d.outlier for d in parts]),
            p=self.p,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.outlier, other.outlier)
        )

    def __repr__(self) -> str:
        return f"Dataset(n={len(self)}, p={self.p}, outliers={int(self.outlier.sum())})"


class WeightedDataset:
    """A dataset plus strictly positive per-example weights (all 1 by default)."""

    __slots__ = ("data", "weights")

    def __init__(self, data: Dataset, weights=None):
        if weights is None:
            weights = np.ones(len(data))
        weights = np.array(weights, dtype=float).reshape(-1)
        if weights.shape[0] != len(data):
            raise ValueError("one weight per example is required")
        if not np.all(weights > 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and strictly positive")
        self.data = data
        self.weights = _frozen(weights)

    def __len__(self) -> int:
        return len(self.data)

    def with_weights(self, weights) -> "WeightedDataset":
        return WeightedDataset(self.data, weights)


def _check_dim(w: np.ndarray, X: np.ndarray) -> None:
    if X.shape[-1] != w.shape[0]:
        raise ValueError(f"dimension mismatch: hypothesis has p={w.shape[0]}, input has {X.shape[-1]}")


@dataclass(frozen=True, eq=False)
class LinearHypothesis:
    """Separator predicting sign(w.x + b), with sign(0) taken as +1.

    ``constant`` marks the degenerate classifier returned for single-class
    training sets (w = 0, b = +-1).
    """

    w: np.ndarray
    b: float
    constant: bool = False

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @property
    def p(self) -> int:
        return self.w.shape[0]

    def decision(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        _check_dim(self.w, X)
        return X @ self.w + self.b

    def predict(self, X) -> np.ndarray:
        """Vectorized labels for the rows of ``X``."""
        return np.where(self.decision(X) >= 0, 1, -1)

    def __neg__(self) -> "LinearHypothesis":
        return LinearHypothesis(-self.w, -self.b, self.constant)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearHypothesis):
            return NotImplemented
        return np.array_equal(self.w, other.w) and self.b == other.b


@dataclass(frozen=True)
class MajorityHypothesis:
    members: tuple[LinearHypothesis, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("majority vote needs at least one member")
        object.__setattr__(self, "members", members)

    @property
    def p(self) -> int:
        return self.members[0].p

    def votes(self, X) -> np.ndarray:
        return sum(h.predict(X) for h in self.members)

    def predict(self, X) -> np.ndarray:
        return np.where(self.votes(X) >= 0, 1, -1)


def predict(h: LinearHypothesis, x) -> int:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("predict expects a single feature vector")
    return int(h.predict(x[None, :])[0])


def majority_predict(H: MajorityHypothesis, x) -> int:
    if not H.members:
        raise ValueError("majority vote needs at least one member")
    x = np.asarray(x, dtype=float)
    return int(H.predict(x[None, :])[0])


class Payload:
    """Message payload kinds with their unit price."""

    EXAMPLE_BATCH = "example-batch"
    HYPOTHESIS = "hypothesis"
    SCALAR = "scalar"
    STATE = "state"

    __slots__ = ("kind", "count")

    def __init__(self, kind: str, count: int = 1):
        if kind not in (self.EXAMPLE_BATCH, self.HYPOTHESIS, self.SCALAR, self.STATE):
            raise ValueError(f"unknown payload kind {kind!r}")
        if count < 0:
            raise ValueError("payload count must be non-negative")
        self.kind = kind
        self.count = int(count)

    @classmethod
    def batch(cls, n: int) -> "Payload":
        return cls(cls.EXAMPLE_BATCH, n)

    @classmethod
    def hypothesis(cls) -> "Payload":
        return cls(cls.HYPOTHESIS, 1)

    @classmethod
    def scalar(cls) -> "Payload":
        return cls(cls.SCALAR, 1)

    @classmethod
    def state(cls, units: int) -> "Payload":
        """Opaque streaming-learner state of ``units`` words."""
        return cls(cls.STATE, units)

    def units(self, p: int) -> int:
        if self.kind == self.EXAMPLE_BATCH:
            return self.count * (p + 1)
        if self.kind == self.HYPOTHESIS:
            return p + 1
        if self.kind == self.SCALAR:
            return 1
        return self.count

    def __repr__(self) -> str:
        return f"Payload({self.kind!r}, {self.count})"


@dataclass(frozen=True)
class LedgerEntry:
    round: int
    sender: int
    receiver: int
    kind: str
    count: int
    units: int


@dataclass
class CostLedger:
    """Append-only message log for one protocol run."""

    p: int
    entries: list[LedgerEntry] = field(default_factory=list)
    total_units: int = 0

    def charge(self, round: int, sender: int, receiver: int, payload: Payload) -> "CostLedger":
        units = payload.units(self.p)
        self.entries.append(LedgerEntry(round, sender, receiver, payload.kind, payload.count, units))
        self.total_units += units
        return self

    def units_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entries:
            out[e.kind] = out.get(e.kind, 0) + e.units
        return out

    def bits(self, bits_per_word: int = 64) -> int:
        """Total cost reported in bits for a given word size."""
        return self.total_units * bits_per_word

    def __len__(self) -> int:
        return len(self.entries)


def charge(ledger: CostLedger, round: int, sender: int, receiver: int, payload: Payload) -> CostLedger:
    return ledger.charge(round, sender, receiver, payload)

