"""Simulator for distributed and streaming robust PAC learning under malicious noise."""

from .core import (
    CostLedger,
    Dataset,
    Example,
    LinearHypothesis,
    MajorityHypothesis,
    Payload,
    Provenance,
    WeightedDataset,
    charge,
    majority_predict,
    predict,
)
from .learner import LearnerConfig, error_rate, learn, weighted_error
from .mwu import MwuParams, compute_potential, sample_RB, sample_size, update_weights
from .protocols import (
    Partition,
    ProtocolConfig,
    emulate_online,
    run_naive,
    run_ws_2machine,
    run_ws_kmachine,
)

__version__ = "0.1.0"
