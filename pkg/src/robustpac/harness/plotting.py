"""Figures rendered next to the CSV outputs.

Figures are built on bare ``matplotlib.figure.Figure`` objects (Agg canvas),
so no pyplot global state is touched and rendering is safe off the main
thread.
"""

from __future__ import annotations

import math

import numpy as np
from matplotlib.figure import Figure

__all__ = ["plot_report", "plot_traces", "STYLE"]

STYLE = {
    "figsize": (9.0, 3.4),
    "dpi": 120,
    "naive": "#4C72B0",
    "ws": "#DD8452",
}


def _float(v: str) -> float:
    return float(v) if v not in ("", None) else math.nan


def plot_report(rows: list[dict], path: str) -> str:
    """Accuracy of both protocols and WS relative cost, per dataset and lambda."""
    fig = Figure(figsize=STYLE["figsize"], dpi=STYLE["dpi"])
    ax_acc, ax_cc = fig.subplots(1, 2)
    labels = [f"{r['dataset']}\n$\\lambda$={r['lambda']}" for r in rows]
    x = np.arange(len(rows))
    width = 0.38
    for off, key, color, name in ((-width / 2, "acc_naive", STYLE["naive"], "Naive"),
                                  (width / 2, "acc_ws", STYLE["ws"], "WS")):
        mean = [_float(r[f"{key}_mean"]) for r in rows]
        std = [_float(r[f"{key}_std"]) for r in rows]
        ax_acc.bar(x + off, mean, width, yerr=std, color=color, label=name, capsize=2)
    ax_acc.set_xticks(x, labels, fontsize=7)
    ax_acc.set_ylabel("training accuracy (%)")
    ax_acc.legend(fontsize=8, frameon=False)
    lo = np.nanmin([_float(r["acc_ws_mean"]) for r in rows] + [_float(r["acc_naive_mean"]) for r in rows] + [100])
    ax_acc.set_ylim(max(0.0, lo - 10.0), 100.5)

    cc = [_float(r["relcc_mean"]) for r in rows]
    cc_sd = [_float(r["relcc_std"]) for r in rows]
    ax_cc.bar(x, cc, 0.6, yerr=cc_sd, color=STYLE["ws"], capsize=2)
    ax_cc.axhline(1.0, color="0.3", lw=0.8, ls="--")
    ax_cc.set_xticks(x, labels, fontsize=7)
    ax_cc.set_ylabel("relative CC (WS / Naive)")
    fig.tight_layout()
    fig.savefig(path)
    return path


def plot_traces(traces: dict[str, list[dict]], path: str) -> str:
    """Per-round training error, misclassified weight fraction and potential."""
    fig = Figure(figsize=(STYLE["figsize"][0], STYLE["figsize"][1]), dpi=STYLE["dpi"])
    axes = fig.subplots(1, 3)
    for name, rows in traces.items():
        rnd = [int(r["round"]) for r in rows]
        axes[0].plot(rnd, [float(r["train_error"]) for r in rows], lw=0.8, label=name)
        axes[1].plot(rnd, [float(r["weighted_miscls_fraction"]) for r in rows], lw=0.8)
        axes[2].semilogy(rnd, [float(r["potential"]) for r in rows], lw=0.8)
    axes[0].set_ylabel("training error")
    axes[1].set_ylabel("misclassified weight fraction")
    axes[2].set_ylabel("potential (sum of weights)")
    for ax in axes:
        ax.set_xlabel("round")
    if 0 < len(traces) <= 8:
        axes[0].legend(fontsize=6, frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    return path
