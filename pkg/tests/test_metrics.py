"""Unit tests for fairness metrics."""

import numpy as np
import pytest

from pesim.metrics import (bgsd, counterfactual_fraction, equal_opportunity,
                           equal_opportunity_arrays, hire_statistics,
                           pool_composition)
from pesim.prediction import LogisticModel, ProspectClass, Variant


def test_bgsd_arithmetic():
    # group0 {0.2, 0.4}, group1 {0.6, 0.8} -> 0.3 - 0.7
    assert bgsd([0.2, 0.4, 0.6, 0.8], [0, 0, 1, 1]) == pytest.approx(-0.4)


def test_bgsd_symmetry_and_absent():
    s = [0.1, 0.9, 0.1, 0.9]
    assert bgsd(s, [0, 1, 1, 0]) == pytest.approx(0.0)
    assert bgsd([1.0, 2.0], [1, 1]) is None
    assert bgsd([], []) is None


def test_bgsd_antisymmetry():
    rng = np.random.default_rng(2)
    s = rng.normal(size=30)
    g = rng.integers(0, 2, size=30)
    if len(set(g)) == 2:
        assert bgsd(s, g) == pytest.approx(-bgsd(s, 1 - g))


def _full(a1, a2, b):
    return LogisticModel((a1, a2), b, Variant.FULL)


def _real(slope, b):
    return LogisticModel((slope,), b, Variant.REAL_PROSPECT)


def test_counterfactual_fraction_hand_built():
    """Four members, two predicted Low, exactly one satisfies both conditions."""
    model = _full(-4.0, -3.0, 2.0)   # low x1 and x_pr=0 -> predicted Low
    real = _real(-4.0, 0.0)          # truly High iff s > 0
    x1 = np.array([0.0, 0.0, 2.0, 2.0])
    x_pr = np.array([0, 0, 0, 1])
    s = np.array([0.5, -0.5, 0.5, 0.5])
    # member 0: pred Low (eta=2), flips High (eta=-1), s>0 truly High -> hit
    # member 1: pred Low, flips High, s<0 truly Low -> no
    # member 2: eta=2-8=-6 pred High -> not in denominator
    # member 3: eta=2-8-3 pred High -> not in denominator
    assert counterfactual_fraction(model, x1, x_pr, s, real) == pytest.approx(0.5)


def test_counterfactual_fraction_base_is_zero_or_absent():
    base = LogisticModel((-2.0,), 1.0, Variant.BASE)
    real = _real(-4.0, 0.0)
    x1 = np.array([-1.0, 2.0])
    assert counterfactual_fraction(base, x1, np.array([0, 1]),
                                   np.array([0.0, 0.0]), real) == 0.0
    # nobody predicted low -> Absent
    assert counterfactual_fraction(base, np.array([2.0, 3.0]),
                                   np.array([0, 1]), np.array([0.0, 0.0]),
                                   real) is None


def test_counterfactual_fraction_empty_denominator_full():
    model = _full(-1.0, 0.0, -5.0)  # everyone predicted High
    real = _real(-1.0, 0.0)
    out = counterfactual_fraction(model, np.array([0.0, 1.0]),
                                  np.array([0, 1]), np.array([0.0, 0.0]), real)
    assert out is None


def test_counterfactual_fraction_zero_attribute_coefficient():
    model = _full(-4.0, 0.0, 2.0)
    real = _real(-4.0, -10.0)  # everyone truly High
    rng = np.random.default_rng(0)
    x1 = rng.normal(size=50)
    x_pr = rng.integers(0, 2, size=50)
    s = rng.normal(size=50)
    out = counterfactual_fraction(model, x1, x_pr, s, real)
    assert out == 0.0  # flips can never change the class


def test_equal_opportunity_arithmetic():
    # privileged: 2 true-Low, both predicted Low -> TNR 1.0
    # underprivileged: 2 true-Low, one predicted Low -> TNR 0.5
    L, H = ProspectClass.LOW, ProspectClass.HIGH
    triples = [(L, L, 1), (L, L, 1), (L, L, 0), (H, L, 0), (H, H, 0), (L, H, 1)]
    assert equal_opportunity(triples) == pytest.approx(0.5)
    # duplicating every record leaves EO unchanged
    assert equal_opportunity(triples * 3) == pytest.approx(0.5)


def test_equal_opportunity_absent_without_true_lows():
    L, H = ProspectClass.LOW, ProspectClass.HIGH
    assert equal_opportunity([(L, L, 1), (H, H, 0)]) is None  # no true-Low upriv
    assert equal_opportunity([]) is None


def test_equal_opportunity_bounds():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = rng.integers(4, 40)
        pred = rng.integers(0, 2, n).astype(bool)
        true = rng.integers(0, 2, n).astype(bool)
        g = rng.integers(0, 2, n)
        eo = equal_opportunity_arrays(pred, true, g)
        if eo is not None:
            assert -1.0 <= eo <= 1.0


def test_pool_composition():
    frac_upriv, fw_priv, fw_upriv = pool_composition(
        x_pr_active=[0, 0, 1], x_pr_waiting=[0, 1, 1, 1])
    assert frac_upriv == pytest.approx(3 / 7)
    assert fw_upriv == pytest.approx(1 / 3)
    assert fw_priv == pytest.approx(3 / 4)
    # empty group -> None for its waiting fraction
    _, fw_priv, _ = pool_composition([0], [0])
    assert fw_priv is None


def test_hire_statistics():
    mean, diff = hire_statistics([2, 4, 6], [0, 0, 1])
    assert mean == pytest.approx(4.0)
    assert diff == pytest.approx(3.0 - 6.0)
    mean, diff = hire_statistics([3], [1])
    assert mean == pytest.approx(3.0)
    assert diff is None
    assert hire_statistics([], []) == (None, None)
