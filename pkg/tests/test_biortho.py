import math

import numpy as np
import pytest

from qactive.biortho import TwoLevelHamiltonian, expectation_time_series, right_left_eigensystem

C = [1 / math.sqrt(2), 1 / math.sqrt(2)]


def test_hermitian_case_left_equals_right():
    sys0 = right_left_eigensystem(TwoLevelHamiltonian(0.25, 0.25, 0.0))
    assert np.allclose(sys0.left, sys0.right)
    assert np.allclose(sys0.biorthogonal_gram(), np.eye(2), atol=1e-14)


@pytest.mark.parametrize("g", [0.0, 1.0, 5.0])
def test_eigenvalues_independent_of_g(g):
    ham = TwoLevelHamiltonian(0.25, 0.25, g)
    sys = right_left_eigensystem(ham)
    assert sys.energies.real == pytest.approx([-math.sqrt(0.125), math.sqrt(0.125)], abs=1e-12)
    for e, r, l in zip(sys.energies, sys.right.T, sys.left.T):
        assert np.allclose(ham.matrix @ r, e * r, atol=1e-12)
        assert np.allclose(l.conj() @ ham.matrix, e * l.conj(), atol=1e-12)


def test_biorthonormal_but_not_orthonormal():
    sys1 = right_left_eigensystem(TwoLevelHamiltonian(0.25, 0.25, 1.0))
    assert np.max(np.abs(sys1.biorthogonal_gram() - np.eye(2))) <= 1e-12
    assert abs(sys1.right_gram()[0, 1]) > 1e-3


def test_gauge_back_to_orthonormal():
    ham = TwoLevelHamiltonian(0.3, 0.1, 1.5)
    sys = right_left_eigensystem(ham)
    restored = np.linalg.inv(ham.gauge) @ sys.right
    assert np.allclose(restored.conj().T @ restored, np.eye(2), atol=1e-12)


def test_degenerate_rejected():
    with pytest.raises(ValueError):
        right_left_eigensystem(TwoLevelHamiltonian(0.0, 0.0, 1.0))


def test_left_right_energy_conserved_right_right_not():
    s = expectation_time_series(TwoLevelHamiltonian(0.25, 0.25, 1.0), C, 100)
    assert np.max(np.abs(s.energy_left_right)) <= 1e-12  # sum |c_n|^2 E_n = 0
    assert np.max(np.abs(s.norm_left_right - 1.0)) <= 1e-12
    assert np.max(np.abs(s.energy_right_right - s.energy_right_right[0])) > 1e-3
    assert np.std(s.norm_right_right) > 1e-4


def test_right_right_energy_oracle():
    # with phi_n the g = 0 eigenvectors, <R|H|R> = phi^dagger A^2 H0 phi
    ham = TwoLevelHamiltonian(0.25, 0.25, 1.0)
    s = expectation_time_series(ham, C, 10)
    h0 = TwoLevelHamiltonian(0.25, 0.25, 0.0).matrix
    e, v = np.linalg.eigh(h0)
    a2 = ham.gauge @ ham.gauge
    for t in range(11):
        phi = v @ (np.array(C) * np.exp(-1j * e * t))
        assert s.energy_right_right[t] == pytest.approx(phi.conj() @ a2 @ h0 @ phi, abs=1e-14)


def test_g0_norm_constant_and_single_mode_stationary():
    s = expectation_time_series(TwoLevelHamiltonian(0.25, 0.25, 0.0), C, 50)
    assert np.max(np.abs(s.norm_right_right - 1.0)) <= 1e-13
    single = expectation_time_series(TwoLevelHamiltonian(0.25, 0.25, 1.0), [1.0, 0.0], 50)
    for series in (single.energy_left_right, single.energy_right_right, single.norm_right_right):
        assert np.ptp(np.abs(series)) < 1e-13


def test_coefficient_count_checked():
    with pytest.raises(ValueError):
        expectation_time_series(TwoLevelHamiltonian(0.25, 0.25, 1.0), [1.0], 5)
