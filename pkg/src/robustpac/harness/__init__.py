from .data import PRESETS, load_csv, read_dataset_csv, split_across_machines, write_dataset_csv
from .experiment import ExperimentConfig, ReportRow, RowResult, parse_config_file, run_experiment, run_row
from .report import build_report

__all__ = [
    "PRESETS",
    "load_csv",
    "read_dataset_csv",
    "write_dataset_csv",
    "split_across_machines",
    "ExperimentConfig",
    "ReportRow",
    "RowResult",
    "parse_config_file",
    "run_experiment",
    "run_row",
    "build_report",
]
