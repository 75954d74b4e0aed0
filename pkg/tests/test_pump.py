import math

import numpy as np
import pytest

from qactive.pump import (RateModel, closed_form, golden_rule_rates, integrate_rate_equations,
                          stationary_ratio)


def test_rates():
    assert golden_rule_rates(0.25, 0.0) == (0.0625, 0.0625)
    w21, w12 = golden_rule_rates(0.25, 1.0)
    assert w21 == pytest.approx(0.0625 * math.e**2)
    assert w12 == pytest.approx(0.0625 * math.e**-2)
    assert w21 == pytest.approx(0.4618, abs=1e-4) and w12 == pytest.approx(0.008459, abs=1e-6)
    for g in (-3.0, 0.4, 7.0):
        assert math.prod(golden_rule_rates(0.3, g)) == pytest.approx(0.3**4)
    with pytest.raises(ValueError):
        golden_rule_rates(0.25, 21.0)


def test_stationary_ratio():
    assert stationary_ratio(0.0) == 1.0
    assert stationary_ratio(1.0) == pytest.approx(54.598150, abs=1e-6)


def test_symmetric_start_is_stationary():
    traj = integrate_rate_equations(RateModel(0.25, 0.0, 0.5, 0.5), 50.0, 0.1)
    assert np.allclose(traj.n1, 0.5, atol=1e-15) and np.allclose(traj.n2, 0.5, atol=1e-15)


@pytest.mark.parametrize("g", [0.0, 0.5, 1.0, -0.7])
def test_matches_closed_form_and_conserves(g):
    model = RateModel(0.25, g, n1=0.9, n2=0.1)
    w21, w12 = model.rates
    t_end = 5.0 / (w21 + w12)
    traj = integrate_rate_equations(model, t_end, t_end / 400)
    exact = closed_form(model, traj.t)
    assert traj.t[-1] == pytest.approx(t_end)
    assert np.max(np.abs(traj.n1 - exact.n1) / exact.n1) < 1e-8
    assert np.max(np.abs(traj.n1 + traj.n2 - 1.0)) < 1e-10
    # antisymmetry of the two derivatives survives discretisation
    assert np.allclose(np.diff(traj.n1), -np.diff(traj.n2), atol=1e-15)


@pytest.mark.parametrize("g", [0.0, 0.5, 1.0])
def test_ratio_converges(g):
    model = RateModel(0.25, g, n1=1.0, n2=0.0)
    rate = sum(model.rates)
    traj = integrate_rate_equations(model, 40 / rate, 0.05 / rate)
    assert traj.ratio[-1] == pytest.approx(stationary_ratio(g), rel=1e-6)
    dev = np.abs(traj.ratio[1:] - stationary_ratio(g))
    assert np.all(np.diff(dev) <= 1e-12)


def test_step_guard_and_grid():
    model = RateModel(0.25, 1.0)
    limit = 2.0 / sum(model.rates)
    with pytest.raises(ValueError):
        integrate_rate_equations(model, 10.0, limit)
    with pytest.raises(ValueError):
        integrate_rate_equations(model, 10.0, 0.0)
    with pytest.raises(ValueError):
        integrate_rate_equations(model, -1.0, 0.1)
    traj = integrate_rate_equations(model, 1.0, 0.3)
    assert len(traj.t) == 5 and np.allclose(np.diff(traj.t), 0.25)
    assert len(integrate_rate_equations(model, 0.0, 0.1).t) == 1


def test_model_validation():
    with pytest.raises(ValueError):
        RateModel(0.25, 0.0, n1=-0.1, n2=1.0)
    with pytest.raises(ValueError):
        RateModel(0.25, 0.0, n1=0.0, n2=0.0)
