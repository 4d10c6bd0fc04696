import numpy as np
import pytest
from hypothesis import given, strategies as st

from robustpac.core import (
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


@pytest.mark.parametrize("w, x, expected", [
    ((1, 0), (2, 5), 1),
    ((1, 0), (0, 3), 1),
    ((-1, 0), (2, 0), -1),
])
def test_predict_examples(w, x, expected):
    assert predict(LinearHypothesis(w, 0.0), x) == expected


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict(LinearHypothesis((1, 0), 0.0), (1, 2, 3))


def test_majority_unanimous_and_ties():
    neg = LinearHypothesis((-1.0,), 0.0)
    pos = LinearHypothesis((1.0,), 0.0)
    x = (2.0,)
    assert majority_predict(MajorityHypothesis((neg, neg, neg)), x) == -1
    assert majority_predict(MajorityHypothesis((pos, neg)), x) == 1
    assert majority_predict(MajorityHypothesis((pos, neg, neg)), x) == -1


def test_majority_needs_members():
    with pytest.raises(ValueError):
        MajorityHypothesis(())


@pytest.mark.parametrize("payload, units", [
    (Payload.batch(10), 1010),
    (Payload.hypothesis(), 101),
    (Payload.scalar(), 1),
])
def test_charge_prices(payload, units):
    ledger = CostLedger(p=100)
    charge(ledger, 1, 1, 0, payload)
    assert ledger.total_units == units
    assert ledger.entries[-1].units == units


@given(st.lists(st.tuples(st.sampled_from(["batch", "hyp", "scalar"]), st.integers(0, 500)), max_size=40),
       st.integers(1, 300))
def test_ledger_additivity(msgs, p):
    ledger = CostLedger(p)
    for kind, n in msgs:
        payload = {"batch": Payload.batch(n), "hyp": Payload.hypothesis(), "scalar": Payload.scalar()}[kind]
        ledger.charge(0, 0, 1, payload)
    assert ledger.total_units == sum(e.units for e in ledger.entries)
    assert len(ledger) == len(msgs)


def test_example_validation():
    with pytest.raises(ValueError):
        Example(np.array([1.0, np.nan]), 1)
    with pytest.raises(ValueError):
        Example(np.array([1.0]), 0)
    e = Example([1.0, 2.0], -1, "outlier")
    assert e.provenance is Provenance.OUTLIER


def test_dataset_roundtrip_and_invariants():
    ex = [Example([1.0, 2.0], 1), Example([0.0, -1.0], -1, Provenance.OUTLIER)]
    d = Dataset.from_examples(ex)
    assert len(d) == 2 and d.p == 2
    assert d[1].provenance is Provenance.OUTLIER
    assert [e.label for e in d] == [1, -1]
    with pytest.raises(ValueError):
        d.X[0, 0] = 3.0
    with pytest.raises(ValueError):
        Dataset([[1.0, 2.0]], [1], p=3)
    with pytest.raises(ValueError):
        Dataset([[1.0]], [2])
    assert len(Dataset.empty(4)) == 0


def test_weighted_dataset_defaults_and_positivity():
    d = Dataset([[0.0], [1.0]], [1, -1])
    wd = WeightedDataset(d)
    assert np.array_equal(wd.weights, [1.0, 1.0])
    with pytest.raises(ValueError):
        WeightedDataset(d, [1.0, 0.0])
    with pytest.raises(ValueError):
        WeightedDataset(d, [1.0])


def test_prediction_is_pure():
    h = LinearHypothesis((0.3, -0.2), 0.1)
    X = np.random.default_rng(0).normal(size=(50, 2))
    assert np.array_equal(h.predict(X), h.predict(X.copy()))
    assert [predict(h, x) for x in X] == list(h.predict(X))
