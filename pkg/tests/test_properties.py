"""Randomised invariants over the walk parameters."""

import math

import numpy as np
from hypothesis import given, settings, strategies as st

from _oracles import dense_u_1d
from qactive.config import load_config
from qactive.gauge import GaugeMap, dense_evolution_matrix, make_stepper
from qactive.lattice import LatticeSpec, WaveFunction, total_norm_sq
from qactive.pump import RateModel, closed_form, integrate_rate_equations
from qactive.walk1d import WalkParams

angles = st.floats(-math.pi, math.pi, allow_nan=False)
small = st.floats(-1.0, 1.0, allow_nan=False)
betas = st.floats(0.05, 1.0)
gs = st.floats(-3.0, 3.0, allow_nan=False)


@st.composite
def walk_params(draw):
    return WalkParams(draw(angles), draw(small), draw(small), draw(small), draw(betas), draw(gs))


@settings(max_examples=40, deadline=None)
@given(walk_params(), st.integers(0, 2**32 - 1))
def test_unitary_at_g_zero(params, seed):
    lat = LatticeSpec.one_d(9)
    rng = np.random.default_rng(seed)
    psi = WaveFunction(rng.standard_normal((9, 4)) + 1j * rng.standard_normal((9, 4)), lat)
    out = make_stepper(params.with_g(0.0), lat)(psi)
    assert math.isclose(total_norm_sq(out), total_norm_sq(psi), rel_tol=1e-12)


@settings(max_examples=30, deadline=None)
@given(walk_params())
def test_gauge_covariance_1d(params):
    lat = LatticeSpec.one_d(5)
    u_g = dense_evolution_matrix(params, lat)
    u_0 = dense_evolution_matrix(params.with_g(0.0), lat)
    conj = GaugeMap(-params.g).matrix(lat) @ u_g @ GaugeMap(params.g).matrix(lat)
    assert np.abs(conj - u_0).max() <= 1e-12 * math.exp(abs(params.g))


@settings(max_examples=15, deadline=None)
@given(walk_params())
def test_gauge_covariance_2d(params):
    lat = LatticeSpec.two_d(3)
    u_g = dense_evolution_matrix(params, lat)
    u_0 = dense_evolution_matrix(params.with_g(0.0), lat)
    conj = GaugeMap(-params.g).matrix(lat) @ u_g @ GaugeMap(params.g).matrix(lat)
    assert np.abs(conj - u_0).max() <= 1e-12 * math.exp(abs(params.g))


@settings(max_examples=30, deadline=None)
@given(walk_params())
def test_matches_oracle(params):
    p = params
    oracle = dense_u_1d(p.theta0, p.epsilon, p.w, p.alpha, p.beta, p.g, 5)
    assert np.abs(dense_evolution_matrix(p, LatticeSpec.one_d(5)) - oracle).max() <= 1e-12 * math.exp(abs(p.g))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(-1.5, 1.5), st.floats(0.0, 1.0))
def test_rate_model_conserves_and_matches(w, g, n1):
    model = RateModel(w, g, n1=n1, n2=1.0 - n1 + 1e-3)
    rate = sum(model.rates)
    traj = integrate_rate_equations(model, 3.0 / rate, 0.01 / rate)
    exact = closed_form(model, traj.t)
    assert np.max(np.abs(traj.n1 + traj.n2 - model.total)) <= 1e-12
    assert np.max(np.abs(traj.n1 - exact.n1)) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.fixed_dictionaries({
    "params.g": gs, "params.theta0": angles, "params.epsilon": small,
    "lattice.extent_x": st.integers(90, 300).map(lambda n: 2 * n + 1),
    "steps": st.integers(0, 500), "initial.delta_x": st.integers(-50, 50),
}))
def test_config_round_trip(mapping):
    cfg = load_config(mapping)
    assert load_config(cfg.to_json()) == cfg
