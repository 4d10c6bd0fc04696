from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from robustpac.bounds import (
    BoundsQuery,
    cc_upper_bound,
    evaluate_all,
    halfspace_lb,
    lb_2machine_1round,
    lb_2machine_tround,
    lb_kmachine_1round,
    lb_kmachine_tround,
    lower_bound_constant,
    sample_complexity,
    space_lb_online,
)

from reference import lb_exact, sample_complexity_hp


@pytest.mark.parametrize("eps, lam, d, expected", [
    ("0.1", "0", 10, 4.8),
    ("0.1", "0.05", 100, 50.526315789473685),
    ("0.3", "0.1", 7, None),
    ("0.45", "0.2", 1, None),
])
def test_two_machine_one_round_exact(eps, lam, d, expected):
    ref = float(lb_exact(eps, lam, d))
    got = lb_2machine_1round(float(eps), float(lam), d)
    assert got == pytest.approx(ref, rel=1e-12)
    if expected is not None:
        assert got == pytest.approx(expected, rel=1e-9)


def test_golden_values():
    assert lb_2machine_tround(0.1, 0.0, 100, 2) == pytest.approx(12.0, rel=1e-9)
    assert space_lb_online(0.1, 0.0, 100, 5) == pytest.approx(9.6, rel=1e-9)
    assert lb_kmachine_1round(0.1, 0.0, 10, 4) == pytest.approx(256 / 15, rel=1e-9)
    # these two sit at lam == eps, outside the public contract; the constant is checked directly
    assert lower_bound_constant(0.1, 0.1) == pytest.approx(8 / 15, rel=1e-9)
    kt = 8 * (1 - 2 * 0.1) / (15 * (1 - 0.1)) * 100 * 4 / 2**2
    assert kt == pytest.approx(47.407407407407405, rel=1e-9)
    assert lower_bound_constant(0.1, 0.1) * 101 == pytest.approx(53.86666666666667, rel=1e-9)
    assert halfspace_lb(0.1, 0.05, 99) == lb_2machine_1round(0.1, 0.05, 100)


def test_lambda_equal_epsilon_is_rejected():
    with pytest.raises(ValueError):
        lb_kmachine_tround(0.1, 0.1, 100, 4, 2)
    with pytest.raises(ValueError):
        halfspace_lb(0.1, 0.1, 100)


def test_sample_complexity_values():
    assert sample_complexity(0.1, 0.1, 0.0, 10) == 795
    assert sample_complexity(0.1, 0.1, 0.0, 100) == 5785
    assert sample_complexity(0.1, 0.1, 0.2, 10) == 1765
    assert sample_complexity(0.1, 0.1, 0.2, 10) / sample_complexity(0.1, 0.1, 0.0, 10) == pytest.approx(
        (0.8 / 0.36), rel=2e-3)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["0.01", "0.05", "0.1", "0.25", "0.4"]),
       st.sampled_from(["0.01", "0.1", "0.5"]),
       st.sampled_from(["0", "0.05", "0.1", "0.3", "0.45"]),
       st.integers(0, 500))
def test_sample_complexity_high_precision(eps, delta, lam, log2_H):
    assert sample_complexity(float(eps), float(delta), float(lam), log2_H) == \
        sample_complexity_hp(eps, delta, lam, log2_H)


def test_cc_upper_bound():
    assert cc_upper_bound(0.1, 0.1, 0.0, 100, 101) == 101 * 5785


def test_monotonicity_grid():
    eps = np.linspace(0.02, 0.48, 10)
    lams = np.linspace(0.0, 0.45, 10)
    for d in (1, 5, 50, 500):
        grid = np.full((10, 10), np.nan)
        for i, e in enumerate(eps):
            for j, l in enumerate(lams):
                if l < e:
                    grid[i, j] = lb_2machine_1round(e, l, d)
        for i in range(10):
            row = grid[i][~np.isnan(grid[i])]
            assert np.all(np.diff(row) > 0)  # increasing in lambda
        for j in range(10):
            col = grid[:, j][~np.isnan(grid[:, j])]
            assert np.all(np.diff(col) < 0)  # decreasing in epsilon


def test_linearity_and_scaling():
    base = lb_2machine_1round(0.2, 0.1, 1)
    for d in (2, 17, 1000):
        assert lb_2machine_1round(0.2, 0.1, d) == pytest.approx(d * base, rel=1e-12)
    for t in (1, 2, 3, 10):
        assert lb_2machine_tround(0.2, 0.1, 30, t) == pytest.approx(30 * base / t**2, rel=1e-12)
    k1 = lb_kmachine_1round(0.2, 0.1, 30, 2)
    for k in (2, 3, 8):
        assert lb_kmachine_1round(0.2, 0.1, 30, k) == pytest.approx(k1 * k / 2, rel=1e-12)
        assert lb_kmachine_tround(0.2, 0.1, 30, k, 3) == pytest.approx(k1 * k / 2 / 9, rel=1e-12)
    assert lb_kmachine_1round(0.5, 0.1, 30, 4) == 0.0


def test_upper_at_least_lower():
    # the sample-based upper bound dominates the one-round lower bound with d = log2|H|
    for e in np.linspace(0.02, 0.45, 12):
        for l in np.linspace(0, 0.4, 9):
            if l >= e:
                continue
            for d in (1, 10, 200):
                assert cc_upper_bound(e, 0.1, l, d, 1.0) >= lb_2machine_1round(e, l, d)


@pytest.mark.parametrize("call", [
    lambda: lb_2machine_1round(0.1, 0.2, 10),
    lambda: lb_2machine_1round(0.0, 0.0, 10),
    lambda: lb_2machine_1round(0.1, 0.0, 0),
    lambda: lb_2machine_tround(0.1, 0.0, 10, 0),
    lambda: lb_kmachine_1round(0.1, 0.0, 10, 1),
    lambda: space_lb_online(0.1, 0.0, 10, 0),
    lambda: halfspace_lb(0.1, 0.0, 0),
    lambda: sample_complexity(0.1, 0.0, 0.0, 10),
    lambda: sample_complexity(0.1, 0.1, 0.5, 10),
    lambda: sample_complexity(0.1, 0.1, 0.0, -1),
    lambda: cc_upper_bound(0.1, 0.1, 0.0, 10, 0),
    lambda: BoundsQuery(0.1, k=1),
])
def test_bound_errors(call):
    with pytest.raises(ValueError):
        call()


def test_evaluate_all():
    q = BoundsQuery(0.1, 0.05, d=101, t=2, k=4, r=3, log2_H=100, delta=0.1, b=101)
    out = evaluate_all(q)
    assert out["halfspace_lb"] == halfspace_lb(0.1, 0.05, 100)
    assert out["lb_2machine_tround"] == pytest.approx(out["lb_2machine_1round"] / 4)
    assert out["space_lb_online"] == pytest.approx(out["lb_2machine_1round"] / 3)
    assert out["cc_upper_bound"] == 101 * out["sample_complexity"]
    assert "halfspace_lb" not in evaluate_all(BoundsQuery(0.1, d=1))
    assert Fraction(8, 15) * Fraction(9, 10) * 10 == Fraction(24, 5)  # 4.8 in exact arithmetic
