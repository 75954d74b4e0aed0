import numpy as np
import pytest
import scipy.linalg as sla

from qactive.gauge import (EigenSolverError, GaugeMap, SpectrumError, apply_gauge,
                           dense_evolution_matrix, dense_spectrum, find_eigenpair, left_vector_for,
                           residual_norm, make_stepper, with_left_vector)
from qactive.krylov import krylov_schur
from qactive.lattice import LatticeSpec, WaveFunction
from qactive.walk1d import WalkParams

LAT1 = LatticeSpec.one_d(11)


def test_gauge_factors_and_inverse():
    gm = GaugeMap(1.0)
    assert gm.factors(4) == pytest.approx(np.exp([-0.5, -0.5, 0.5, 0.5]))
    psi = WaveFunction(np.arange(44).reshape(11, 4) + 1j, LAT1)
    back = apply_gauge(apply_gauge(psi, 1.0), 1.0, direction="inverse")
    assert np.allclose(back.amplitudes, psi.amplitudes, rtol=1e-15)
    with pytest.raises(ValueError):
        apply_gauge(psi, 1.0, direction="sideways")
    with pytest.raises(ValueError):
        GaugeMap(25.0)


@pytest.mark.parametrize("lat,preset", [(LAT1, WalkParams.preset_1d),
                                        (LatticeSpec.two_d(3), WalkParams.preset_2d)])
@pytest.mark.parametrize("g", [0.5, 1.0, -1.5])
def test_gauge_similarity(lat, preset, g):
    u_g = dense_evolution_matrix(preset(g), lat)
    u_0 = dense_evolution_matrix(preset(0.0), lat)
    conj = GaugeMap(-g).matrix(lat) @ u_g @ GaugeMap(g).matrix(lat)
    assert np.abs(conj - u_0).max() <= 1e-12


def test_dense_spectrum_sorted_and_on_circle():
    values = dense_spectrum(dense_evolution_matrix(WalkParams.preset_1d(1.0), LatticeSpec.one_d(21)))
    assert values.size == 84
    assert np.all(np.diff(np.angle(values)) >= 0)
    assert np.max(np.abs(np.abs(values) - 1)) < 1e-9


def test_dense_spectrum_known_matrix():
    values = dense_spectrum(np.diag([1j, -1.0, 1.0]))
    assert values == pytest.approx([1.0, 1j, -1.0])


def test_dense_spectrum_flags_failed_residual():
    # rounding alone leaves residuals far above an absurdly tight bound
    m = np.random.default_rng(0).standard_normal((10, 10))
    with pytest.raises(SpectrumError) as info:
        dense_spectrum(m, residual_tol=1e-30)
    assert info.value.partial.shape == (10,) and info.value.valid.shape == (10,)


def test_dense_size_limit():
    with pytest.raises(ValueError):
        dense_evolution_matrix(WalkParams.preset_1d(), LatticeSpec.one_d(2501))


def test_krylov_schur_dominant_eigenvalues():
    rng = np.random.default_rng(5)
    n = 300
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.linspace(0.1, 1.0, n)
    d[-1], d[-2] = 3.0, 2.5
    a = q @ np.diag(d) @ q.T
    res = krylov_schur(lambda v: a @ v, rng.standard_normal(n) + 0j, nev=2, ncv=30, tol=1e-12)
    assert res.converged
    assert sorted(np.abs(res.values)) == pytest.approx([2.5, 3.0], rel=1e-10)
    for mu, v in zip(res.values, res.vectors.T):
        assert np.linalg.norm(a @ v - mu * v) < 1e-9


def test_find_eigenpair_matches_dense_on_small_lattice():
    lat = LatticeSpec.one_d(41)
    p = WalkParams.preset_1d(0.0)
    values = sla.eigvals(dense_evolution_matrix(p, lat))
    target = np.exp(0.3j)
    expected = values[np.argmin(np.abs(values - target))]
    pair = find_eigenpair(p, lat, target, tol=1e-10, ncv=40, max_distance=1.0)
    assert abs(pair.eigenvalue - expected) < 1e-10
    assert pair.residual <= 1e-10
    assert residual_norm(make_stepper(p, lat), pair.right_vector, pair.eigenvalue) <= 1e-10


def test_find_eigenpair_at_nonzero_g_keeps_eigenvalue():
    lat = LatticeSpec.one_d(41)
    target = np.exp(0.3j)
    pair0 = find_eigenpair(WalkParams.preset_1d(0.0), lat, target, ncv=40, max_distance=1.0)
    pair1 = find_eigenpair(WalkParams.preset_1d(1.0), lat, target, ncv=40, max_distance=1.0)
    assert abs(pair1.eigenvalue - pair0.eigenvalue) < 1e-12
    assert pair1.g == 1.0 and pair1.residual <= 1e-10


def test_find_eigenpair_rejects_off_circle_target():
    with pytest.raises(ValueError):
        find_eigenpair(WalkParams.preset_1d(), LAT1, 0.5)


def test_find_eigenpair_reports_best_when_too_far():
    with pytest.raises(EigenSolverError) as info:
        find_eigenpair(WalkParams.preset_1d(), LatticeSpec.one_d(21), 1.0, max_distance=1e-12)
    assert info.value.best is not None


@pytest.mark.parametrize("g", [0.0, 1.0])
def test_left_vector_is_left_eigenvector(g):
    lat = LatticeSpec.one_d(41)
    p = WalkParams.preset_1d(g)
    pair = with_left_vector(find_eigenpair(p, lat, np.exp(0.3j), ncv=40, max_distance=1.0))
    u = dense_evolution_matrix(p, lat)
    left = pair.left_vector.vector
    # <L| U = lambda <L|  <=>  U^dagger |L> = conj(lambda) |L>
    assert np.linalg.norm(u.conj().T @ left - np.conj(pair.eigenvalue) * left) < 1e-9 * np.linalg.norm(left)
    assert np.vdot(left, pair.right_vector.vector) == pytest.approx(1.0, abs=1e-12)
    if g == 0.0:
        assert np.allclose(pair.left_vector.vector, pair.right_vector.vector, atol=1e-12)


def test_left_vector_overlap_with_other_eigenvector_vanishes():
    lat = LatticeSpec.one_d(41)
    p = WalkParams.preset_1d(1.0)
    a = find_eigenpair(p, lat, np.exp(0.3j), ncv=40, max_distance=1.0)
    b = find_eigenpair(p, lat, np.exp(-2.0j), ncv=40, max_distance=1.0)
    assert abs(a.eigenvalue - b.eigenvalue) > 1e-3
    assert abs(np.vdot(left_vector_for(a).vector, b.right_vector.vector)) < 1e-9
