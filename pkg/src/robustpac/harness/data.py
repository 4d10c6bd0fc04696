"""Dataset ingestion, CSV round-tripping and machine partitioning."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from ..core import Dataset
from ..protocols import Partition

__all__ = [
    "SyntheticSpec",
    "PRESETS",
    "load_csv",
    "read_dataset_csv",
    "write_dataset_csv",
    "split_across_machines",
]


@dataclass(frozen=True)
class SyntheticSpec:
    n_total: int
    k: int
    p: int

    @property
    def per_machine(self) -> int:
        return self.n_total // self.k


# total examples / machines / dimension for the synthetic benchmarks;
# the *-small entries are desk-scale versions used by the acceptance suite
PRESETS = {
    "syn1": SyntheticSpec(20_000, 2, 100),
    "syn2": SyntheticSpec(40_000, 2, 100),
    "syn3": SyntheticSpec(20_000, 4, 100),
    "syn4": SyntheticSpec(40_000, 4, 100),
    "syn1-small": SyntheticSpec(4_000, 2, 50),
    "desk": SyntheticSpec(4_000, 2, 20),
}


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ValueError(f"{path}: empty file")
        header = [h.strip() for h in header]
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: line {reader.line_num}: expected {len(header)} fields, got {len(row)}")
            rows.append((reader.line_num, [c.strip() for c in row]))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return header, rows


def load_csv(path, label_col: str = "label", positive_token: str = "1",
             missing: str | None = None, drop_cols=(), standardize: bool = True) -> Dataset:
    """Load a headered CSV into a standardized, one-hot encoded dataset.

    Columns whose every value parses as a float are kept as numbers; all
    other feature columns are expanded to one indicator per category (sorted
    category order). Rows containing the ``missing`` token are skipped. An
    optional ``provenance`` column is read as hidden outlier flags.
    """
    header, rows = _read_rows(path)
    if label_col not in header:
        raise ValueError(f"{path}: no label column {label_col!r}")
    li = header.index(label_col)
    pi = header.index("provenance") if "provenance" in header else None
    skip = {li, pi} | {header.index(c) for c in drop_cols}
    if missing is not None:
        rows = [(n, r) for n, r in rows if missing not in r]
        if not rows:
            raise ValueError(f"{path}: every row contains the missing token {missing!r}")

    labels = sorted({r[li] for _, r in rows})
    if len(labels) > 2:
        raise ValueError(f"{path}: label column {label_col!r} is not binary: {labels[:5]}")
    if positive_token not in labels and len(labels) == 2:
        raise ValueError(f"{path}: positive token {positive_token!r} not among labels {labels}")
    y = np.array([1 if r[li] == positive_token else -1 for _, r in rows])

    columns = []
    for j in range(len(header)):
        if j in skip:
            continue
        values = [r[j] for _, r in rows]
        if all(_is_float(v) for v in values):
            columns.append(np.array(values, dtype=float)[:, None])
        else:
            cats = sorted(set(values))
            columns.append(np.array([[v == c for c in cats] for v in values], dtype=float))
    if not columns:
        raise ValueError(f"{path}: no feature columns")
    X = np.hstack(columns)
    if standardize:
        sd = X.std(axis=0)
        X = (X - X.mean(axis=0)) / np.where(sd > 0, sd, 1.0)
    outlier = None
    if pi is not None:
        outlier = [r[pi] == "outlier" for _, r in rows]
    return Dataset(X, y, outlier)


def read_dataset_csv(path) -> Dataset:
    """Read the tool's own dataset format verbatim (no encoding or scaling)."""
    header, rows = _read_rows(path)
    if "label" not in header:
        raise ValueError(f"{path}: no 'label' column")
    li = header.index("label")
    pi = header.index("provenance") if "provenance" in header else None
    feat = [j for j in range(len(header)) if j not in (li, pi)]
    X = np.empty((len(rows), len(feat)))
    y = np.empty(len(rows), dtype=np.int64)
    for i, (line, r) in enumerate(rows):
        try:
            X[i] = [float(r[j]) for j in feat]
            y[i] = int(r[li])
        except ValueError as exc:
            raise ValueError(f"{path}: line {line}: {exc}") from None
        if y[i] not in (-1, 1):
            raise ValueError(f"{path}: line {line}: label must be -1 or +1")
    outlier = [r[pi] == "outlier" for _, r in rows] if pi is not None else None
    return Dataset(X, y, outlier)


def write_dataset_csv(data: Dataset, path, provenance: bool = True) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = [f"x{j}" for j in range(data.p)] + ["label"]
        if provenance:
            head.append("provenance")
        w.writerow(head)
        for x, y, o in zip(data.X, data.y, data.outlier):
            row = [repr(float(v)) for v in x] + [int(y)]
            if provenance:
                row.append("outlier" if o else "genuine")
            w.writerow(row)


def split_across_machines(data: Dataset, k: int, seed: int = 0) -> Partition:
    """Shuffle deterministically, then cut into k contiguous shards.

    The remainder of ``n / k`` goes to machine 1 (10 examples over 3
    machines gives 4, 3, 3).
    """
    if k < 2:
        raise ValueError("need at least two machines")
    n = len(data)
    if k > n:
        raise ValueError(f"cannot split {n} examples across {k} machines")
    shuffled = data.take(np.random.default_rng(seed).permutation(n))
    base, extra = divmod(n, k)
    sizes = [base + extra] + [base] * (k - 1)
    bounds = np.cumsum([0] + sizes)
    return Partition(tuple(shuffled.take(np.arange(bounds[i], bounds[i + 1])) for i in range(k)))
