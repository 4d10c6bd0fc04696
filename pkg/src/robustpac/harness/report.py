"""Merge report and trace CSVs from several runs and render figures."""

from __future__ import annotations

import csv
import glob
import os

from ..protocols import RoundTrace
from .experiment import REPORT_FIELDS
from .plotting import plot_report, plot_traces

__all__ = ["collect_inputs", "merge_reports", "merge_traces", "build_report"]


def _read(path) -> tuple[list[str], list[dict]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)


def collect_inputs(inputs) -> tuple[list[str], list[str]]:
    """Split paths (files or run directories) into report and trace CSVs."""
    reports, traces = [], []
    for item in inputs:
        if os.path.isdir(item):
            reports += sorted(glob.glob(os.path.join(item, "report.csv")))
            traces += sorted(glob.glob(os.path.join(item, "traces", "trace_*.csv")))
            continue
        header, _ = _read(item)
        if tuple(header) == REPORT_FIELDS:
            reports.append(item)
        elif tuple(header) == RoundTrace.CSV_FIELDS:
            traces.append(item)
        else:
            raise ValueError(f"{item}: neither a report nor a trace CSV")
    return reports, traces


def merge_reports(paths) -> list[dict]:
    rows = []
    for path in paths:
        header, body = _read(path)
        if tuple(header) != REPORT_FIELDS:
            raise ValueError(f"{path}: unexpected report columns {header}")
        rows += body
    return rows


def merge_traces(paths) -> dict[str, list[dict]]:
    out = {}
    for path in paths:
        header, body = _read(path)
        if tuple(header) != RoundTrace.CSV_FIELDS:
            raise ValueError(f"{path}: unexpected trace columns {header}")
        name = os.path.splitext(os.path.basename(path))[0]
        if name.startswith("trace_"):
            name = name[len("trace_"):]
        out[name] = body
    return out


def build_report(inputs, out: str, figures: bool = True) -> dict[str, str]:
    """Write merged ``report.csv`` / ``traces.csv`` and, optionally, PNG figures."""
    reports, traces = collect_inputs(inputs)
    os.makedirs(out, exist_ok=True)
    written = {}
    rows = merge_reports(reports)
    path = os.path.join(out, "report.csv")
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, REPORT_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    written["report"] = path

    merged = merge_traces(traces)
    path = os.path.join(out, "traces.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("source",) + RoundTrace.CSV_FIELDS)
        for name, body in merged.items():
            for r in body:
                w.writerow([name] + [r[f] for f in RoundTrace.CSV_FIELDS])
    written["traces"] = path

    if figures:
        if rows:
            written["report_figure"] = plot_report(rows, os.path.join(out, "report.png"))
        if merged:
            written["trace_figure"] = plot_traces(merged, os.path.join(out, "traces.png"))
    return written
