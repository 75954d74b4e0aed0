"""Right/left eigensystems of the 2x2 pump Hamiltonian and their dynamics.

The full internal H_NH is two copies of the same 2x2 block, so every
eigenvalue is doubly degenerate there; the checks use one block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk1d import check_g, nonhermitian_block


@dataclass(frozen=True)
class TwoLevelHamiltonian:
    epsilon: float
    w: float
    g: float

    def __post_init__(self):
        check_g(self.g)

    @property
    def matrix(self) -> np.ndarray:
        return nonhermitian_block(self.epsilon, self.w, self.g)

    @property
    def gauge(self) -> np.ndarray:
        return np.diag([math.exp(-self.g / 2), math.exp(self.g / 2)])


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """Columns of ``right`` are |R_n>; columns of ``left`` are |L_n> = <L_n|^dagger."""

    energies: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def biorthogonal_gram(self) -> np.ndarray:
        return self.left.conj().T @ self.right

    def right_gram(self) -> np.ndarray:
        return self.right.conj().T @ self.right


def right_left_eigensystem(ham: TwoLevelHamiltonian) -> Eigensystem:
    """Eigenvectors of the Hermitian g = 0 block pushed through the gauge map."""
    if ham.epsilon == 0 and ham.w == 0:
        raise ValueError("epsilon = w = 0 gives a degenerate spectrum")
    h0 = nonhermitian_block(ham.epsilon, ham.w, 0.0)
    energies, vecs = np.linalg.eigh(h0)
    gauge = ham.gauge
    right = gauge @ vecs
    left = np.linalg.inv(gauge) @ vecs  # A^-1 is real diagonal, so its dagger is itself
    # <L_n|R_n> is already 1; rescale only to absorb rounding
    overlaps = np.einsum("in,in->n", left.conj(), right)
    left = left / overlaps.conj()
    return Eigensystem(energies.astype(complex), right, left)


@dataclass(frozen=True, eq=False)
class ExpectationSeries:
    steps: np.ndarray
    energy_left_right: np.ndarray
    energy_right_right: np.ndarray
    norm_right_right: np.ndarray
    norm_left_right: np.ndarray


def expectation_time_series(ham: TwoLevelHamiltonian, coefficients, t_max: int) -> ExpectationSeries:
    """Evolve sum_n c_n e^{-i E_n T} |R_n> and its left partner at integer T."""
    c = np.asarray(coefficients, dtype=complex)
    system = right_left_eigensystem(ham)
    if c.shape != system.energies.shape:
        raise ValueError(f"need {system.energies.size} coefficients")
    h = ham.matrix
    steps = np.arange(int(t_max) + 1)
    phase = np.exp(-1j * np.outer(steps, system.energies))
    kets = (phase * c) @ system.right.T  # rows are |psi^R(T)>
    lefts = (phase * c) @ system.left.T  # rows are |psi^L(T)>, the dagger of the bra
    hk = kets @ h.T
    e_lr = np.einsum("ti,ti->t", lefts.conj(), hk)
    e_rr = np.einsum("ti,ti->t", kets.conj(), hk)
    n_rr = np.einsum("ti,ti->t", kets.conj(), kets).real
    n_lr = np.einsum("ti,ti->t", lefts.conj(), kets)
    return ExpectationSeries(steps, e_lr, e_rr, n_rr, n_lr)
