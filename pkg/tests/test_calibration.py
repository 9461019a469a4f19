"""Margin-to-probability calibration."""

import math

import numpy as np
import pytest

from bucket_ensemble.calibration import SigmoidCalibrator, stable_sigmoid


def test_sigmoid_extremes_do_not_overflow():
    assert stable_sigmoid(1000.0) == pytest.approx(1.0, abs=1e-12)
    assert stable_sigmoid(-1000.0) == pytest.approx(0.0, abs=1e-12)
    assert stable_sigmoid(0.0) == 0.5
    grid = np.linspace(-800, 800, 101)
    p = stable_sigmoid(grid)
    assert np.all((p >= 0.0) & (p <= 1.0))
    assert np.all(np.diff(p) >= 0.0)


def test_symmetric_two_point_fit_has_analytic_solution():
    # One margin per class at -1 and +1. The smoothed targets are 1/3
    # and 2/3, so the stationary point is offset 0, sigmoid(slope) = 2/3,
    # i.e. slope = ln 2.
    cal = SigmoidCalibrator().fit(np.array([-1.0, 1.0]), np.array([-1, 1]))
    assert cal.offset_ == pytest.approx(0.0, abs=1e-6)
    assert cal.slope_ == pytest.approx(math.log(2.0), abs=1e-6)
    assert cal.positive_probability(np.array([0.0]))[0] == pytest.approx(0.5, abs=1e-9)


def test_slope_is_never_negative():
    # Margins anti-correlated with labels would need a negative slope;
    # the calibrator neutralizes instead of inverting the classifier.
    cal = SigmoidCalibrator().fit(np.array([2.0, 1.0, -1.0, -2.0]),
                                  np.array([-1, -1, 1, 1]))
    assert cal.slope_ == 0.0
    p = cal.positive_probability(np.array([-5.0, 0.0, 5.0]))
    assert np.allclose(p, 0.5)


def test_probabilities_monotone_in_margin():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(6, 40))
        margins = rng.normal(size=n) * 3.0
        labels = np.where(margins + rng.normal(size=n) > 0, 1, -1)
        if len(set(labels.tolist())) < 2:
            continue
        cal = SigmoidCalibrator().fit(margins, labels)
        assert cal.slope_ >= 0.0
        grid = np.linspace(-10, 10, 50)
        p = cal.positive_probability(grid)
        assert np.all((p >= 0.0) & (p <= 1.0))
        assert np.all(np.diff(p) >= -1e-12)


def test_separated_margins_stay_finite_and_steep():
    margins = np.array([-3.0, -2.5, -2.0, 2.0, 2.5, 3.0])
    labels = np.array([-1, -1, -1, 1, 1, 1])
    cal = SigmoidCalibrator().fit(margins, labels)
    assert np.isfinite(cal.slope_) and np.isfinite(cal.offset_)
    assert cal.slope_ > 0.0
    p = cal.positive_probability(margins)
    assert np.all(p[labels == 1] > 0.5)
    assert np.all(p[labels == -1] < 0.5)


def test_single_class_margins_fall_back_to_identity():
    cal = SigmoidCalibrator().fit(np.array([0.5, 1.5, 2.0]), np.array([1, 1, 1]))
    assert (cal.slope_, cal.offset_) == (1.0, 0.0)


def test_log_odds_is_affine():
    cal = SigmoidCalibrator().fit(np.array([-2.0, -1.0, 1.0, 2.0]),
                                  np.array([-1, -1, 1, 1]))
    f = np.array([-1.0, 0.0, 2.0])
    assert np.allclose(cal.log_odds(f), cal.slope_ * f + cal.offset_, atol=1e-12)
