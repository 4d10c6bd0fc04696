"""Seeded experiment orchestration and CSV reporting."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..core import Dataset
from ..learner import LearnerConfig, error_rate
from ..oracles import OracleConfig, draw_labeled_sample, inject_outliers, make_adversary, make_task
from ..protocols import (
    C_PROOF,
    ProtocolConfig,
    RoundTrace,
    naive_cost,
    run_naive,
    run_ws_2machine,
    run_ws_kmachine,
)
from .data import PRESETS, load_csv, split_across_machines

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "RowResult",
    "ReportRow",
    "REPORT_FIELDS",
    "derive_seed",
    "run_row",
    "run_experiment",
    "aggregate",
    "parse_config_file",
]

REPORT_FIELDS = ("dataset", "lambda", "seed_count", "acc_naive_mean", "acc_naive_std",
                 "acc_ws_mean", "acc_ws_std", "relcc_mean", "relcc_std")
ROW_FIELDS = ("dataset", "lambda", "seed", "acc_naive", "acc_ws", "ws_units", "naive_units", "relcc")


def derive_seed(seed: int, *tags: int) -> int:
    """Independent 64-bit stream id for one component of a row."""
    return int(np.random.SeedSequence([seed, *tags]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "syn1-small"
    dataset: str = "synthetic"
    p: int = 50
    n_total: int = 4000
    k: int = 2
    separation: float = 6.0
    adversary: str = "gaussian-noise"
    csv_path: str = ""
    label_col: str = "label"
    positive_token: str = "1"
    missing: str = ""
    epsilon: float = 0.25
    lambdas: tuple[float, ...] = (0.1, 0.2)
    seeds: tuple[int, ...] = tuple(range(10))
    protocols: tuple[str, ...] = ("ws", "naive")
    c_formula: str = C_PROOF
    epochs: int = 50
    regularization: float = 1e-3
    out: str = "out"
    threads: int = 1

    def __post_init__(self):
        if self.dataset not in ("synthetic", "csv"):
            raise ValueError(f"unknown dataset source {self.dataset!r}")
        if self.dataset == "csv" and not self.csv_path:
            raise ValueError("csv datasets need csv_path")
        bad = set(self.protocols) - {"ws", "naive"}
        if bad:
            raise ValueError(f"unknown protocols {sorted(bad)}")
        if self.k < 2:
            raise ValueError("need at least two machines")
        if self.dataset == "synthetic" and self.n_total % self.k:
            raise ValueError(f"n_total={self.n_total} is not divisible across k={self.k} machines")

    @property
    def per_machine(self) -> int:
        return self.n_total // self.k

    @classmethod
    def preset(cls, name: str, **overrides) -> "ExperimentConfig":
        spec = PRESETS[name]
        return cls(name=name, p=spec.p, n_total=spec.n_total, k=spec.k, **overrides)


_TUPLE_TYPES = {"lambdas": float, "seeds": int, "protocols": str}


def _coerce(name: str, raw: str):
    if name in _TUPLE_TYPES:
        conv = _TUPLE_TYPES[name]
        return tuple(conv(v.strip()) for v in raw.split(",") if v.strip())
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[name]
    if kind in ("int", int):
        return int(raw)
    if kind in ("float", float):
        return float(raw)
    return raw


def parse_config_file(path, **overrides) -> ExperimentConfig:
    """Read a flat ``key = value`` file; ``#`` starts a comment.

    A ``preset`` key seeds the dataset shape from a named preset before the
    remaining keys are applied.
    """
    known = {f.name for f in fields(ExperimentConfig)}
    values: dict = {}
    preset = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key = value")
            key, raw = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "preset":
                preset = raw
                continue
            if key not in known:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            values[key] = _coerce(key, raw)
    values.update(overrides)
    if preset:
        spec = PRESETS[preset]
        base = {"name": preset, "p": spec.p, "n_total": spec.n_total, "k": spec.k}
        base.update(values)
        values = base
    return ExperimentConfig(**values)


@dataclass
class RowResult:
    dataset: str
    lam: float
    seed: int
    acc_naive: float | None = None
    acc_ws: float | None = None
    ws_units: int | None = None
    naive_units: int | None = None
    relcc: float | None = None
    trace: list[RoundTrace] = field(default_factory=list)
    error: str | None = None


@dataclass
class ReportRow:
    dataset: str
    lam: float
    seed_count: int
    acc_naive: tuple[float, float] | None
    acc_ws: tuple[float, float] | None
    relcc: tuple[float, float] | None

    def csv_row(self) -> list[str]:
        def pair(v):
            return ["", ""] if v is None else [f"{v[0]:.6f}", f"{v[1]:.6f}"]
        return [self.dataset, f"{self.lam:g}", str(self.seed_count),
                *pair(self.acc_naive), *pair(self.acc_ws), *pair(self.relcc)]


def _row_data(cfg: ExperimentConfig, lam: float, seed: int, base: Dataset | None) -> Dataset:
    adversary = make_adversary(cfg.adversary)
    oracle_seed = derive_seed(seed, 1)
    if cfg.dataset == "csv":
        return inject_outliers(base, lam, np.random.default_rng(oracle_seed), adversary)
    task = make_task(cfg.p, cfg.separation, seed=derive_seed(seed, 0))
    half = cfg.n_total // 2
    return draw_labeled_sample(task, OracleConfig(lam, adversary, oracle_seed), half, cfg.n_total - half)


def run_row(cfg: ExperimentConfig, lam: float, seed: int, base: Dataset | None = None) -> RowResult:
    """One (lambda, seed) cell: data, protocols, accuracies and relative CC."""
    row = RowResult(cfg.name, lam, seed)
    data = _row_data(cfg, lam, seed, base)
    parts = split_across_machines(data, cfg.k, seed=derive_seed(seed, 2))
    union = parts.union()
    lcfg = LearnerConfig(regularization=cfg.regularization, epochs=cfg.epochs, seed=derive_seed(seed, 3))
    row.naive_units = naive_cost(parts)
    if "naive" in cfg.protocols:
        nv = run_naive(parts, learner_cfg=lcfg)
        row.acc_naive = 100.0 * (1.0 - error_rate(nv.hypothesis, union))
    if "ws" in cfg.protocols:
        pcfg = ProtocolConfig(epsilon=cfg.epsilon, lam=lam, c_formula=cfg.c_formula,
                              seed=derive_seed(seed, 4), learner=lcfg)
        if parts.k == 2:
            run = run_ws_2machine(parts[0], parts[1], pcfg)
        else:
            run = run_ws_kmachine(parts, pcfg)
        row.acc_ws = 100.0 * (1.0 - error_rate(run.hypothesis, union))
        row.ws_units = run.ledger.total_units
        row.relcc = row.ws_units / row.naive_units
        row.trace = run.trace
    return row


def _safe_row(cfg, lam, seed, base) -> RowResult:
    try:
        return run_row(cfg, lam, seed, base)
    except Exception as exc:  # a failed cell is recorded, not fatal
        log.warning("row %s lam=%g seed=%d failed: %s", cfg.name, lam, seed, exc)
        return RowResult(cfg.name, lam, seed, error=f"{type(exc).__name__}: {exc}")


def _mean_std(values) -> tuple[float, float] | None:
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    a = np.array(vals, dtype=float)
    return float(a.mean()), float(a.std())


def aggregate(rows: list[RowResult], want_relcc: bool = True) -> list[ReportRow]:
    """Mean and population std per (dataset, lambda), in first-seen order."""
    groups: dict[tuple[str, float], list[RowResult]] = {}
    for r in rows:
        if r.error is None:
            groups.setdefault((r.dataset, r.lam), []).append(r)
    out = []
    for (name, lam), rs in groups.items():
        out.append(ReportRow(
            name, lam, len(rs),
            _mean_std(r.acc_naive for r in rs),
            _mean_std(r.acc_ws for r in rs),
            _mean_std(r.relcc for r in rs) if want_relcc else None,
        ))
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def trace_filename(dataset: str, lam: float, seed: int) -> str:
    return f"trace_{dataset}_lam{lam:g}_seed{seed}.csv"


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> tuple[list[ReportRow], list[RowResult]]:
    """Run every (lambda, seed) cell and, if ``write``, emit the CSV outputs.

    Files written under ``cfg.out``: ``report.csv`` (one line per lambda),
    ``rows.csv`` (one line per cell), ``traces/trace_*.csv`` for every WS
    run and ``failures.csv`` when any cell raised.
    """
    if not cfg.protocols:
        rows: list[RowResult] = []
    else:
        base = None
        if cfg.dataset == "csv":
            base = load_csv(cfg.csv_path, cfg.label_col, cfg.positive_token, cfg.missing or None)
        cells = [(lam, seed) for lam in cfg.lambdas for seed in cfg.seeds]
        with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
            rows = list(pool.map(lambda c: _safe_row(cfg, c[0], c[1], base), cells))
    report = aggregate(rows, want_relcc="ws" in cfg.protocols)
    if write:
        write_outputs(cfg.out, report, rows)
    return report, rows


def write_outputs(out: str, report: list[ReportRow], rows: list[RowResult]) -> None:
    os.makedirs(out, exist_ok=True)
    _write_csv(os.path.join(out, "report.csv"), REPORT_FIELDS, [r.csv_row() for r in report])
    ok = [r for r in rows if r.error is None]
    _write_csv(os.path.join(out, "rows.csv"), ROW_FIELDS,
               [[r.dataset, f"{r.lam:g}", r.seed, _fmt(r.acc_naive), _fmt(r.acc_ws),
                 _fmt(r.ws_units), _fmt(r.naive_units), _fmt(r.relcc)] for r in ok])
    tdir = os.path.join(out, "traces")
    for r in ok:
        if r.trace:
            os.makedirs(tdir, exist_ok=True)
            _write_csv(os.path.join(tdir, trace_filename(r.dataset, r.lam, r.seed)),
                       RoundTrace.CSV_FIELDS, [[_fmt(v) for v in t.csv_row()] for t in r.trace])
    failed = [r for r in rows if r.error is not None]
    fpath = os.path.join(out, "failures.csv")
    if failed:
        _write_csv(fpath, ("dataset", "lambda", "seed", "error"),
                   [[r.dataset, f"{r.lam:g}", r.seed, r.error] for r in failed])
    elif os.path.exists(fpath):
        os.remove(fpath)


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
