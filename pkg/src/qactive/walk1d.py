"""One-dimensional walk: U = S C N(g), applied matrix-free."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .lattice import LatticeSpec, WaveFunction

G_CAP = 20.0


def check_g(g: float) -> float:
    g = float(g)
    if not math.isfinite(g) or abs(g) > G_CAP:
        raise ValueError(f"|g| must be <= {G_CAP}, got {g}")
    return g


@dataclass(frozen=True)
class WalkParams:
    """Scalar walk parameters; angles in radians, beta per site."""

    theta0: float
    epsilon: float
    w: float
    alpha: float
    beta: float
    g: float = 0.0

    def __post_init__(self):
        for name in ("theta0", "epsilon", "w", "alpha", "beta", "g"):
            value = getattr(self, name)
            if not math.isfinite(float(value)):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        check_g(self.g)

    @property
    def theta_g(self) -> float:
        return self.theta0 + self.epsilon

    @property
    def theta_e(self) -> float:
        return self.theta0 - self.epsilon

    def with_g(self, g: float) -> "WalkParams":
        return replace(self, g=g)

    @classmethod
    def preset_1d(cls, g: float = 0.0) -> "WalkParams":
        return cls(theta0=math.pi / 8, epsilon=0.25, w=0.25, alpha=1.0, beta=0.025, g=g)

    @classmethod
    def preset_2d(cls, g: float = 0.0) -> "WalkParams":
        return cls(theta0=math.pi / 8, epsilon=0.25, w=0.25, alpha=0.5, beta=0.05, g=g)


@dataclass(frozen=True, eq=False)
class ThetaProfile:
    """Per-site coin angles for the ground and excited sectors."""

    theta_G: np.ndarray
    theta_E: np.ndarray


def linear_potential(theta: float, coords: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Piecewise profile: +theta left of the ramp, theta*(alpha+beta*x) on it, -theta right."""
    if beta == 0:
        raise ValueError("beta must be nonzero")
    coords = np.asarray(coords, dtype=float)
    lo = (-alpha - 1.0) / beta
    hi = (-alpha + 1.0) / beta
    if lo > hi:
        lo, hi = hi, lo
    ramp = theta * (alpha + beta * coords)
    return np.where(coords < lo, theta, np.where(coords > hi, -theta, ramp))


def theta_profile_1d(params: WalkParams, lattice: LatticeSpec) -> ThetaProfile:
    if lattice.dimension != 1:
        raise ValueError("theta_profile_1d needs a 1D lattice")
    x = lattice.coords(0)
    return ThetaProfile(
        linear_potential(params.theta_g, x, params.alpha, params.beta),
        linear_potential(params.theta_e, x, params.alpha, params.beta),
    )


def nonhermitian_block(epsilon: float, w: float, g: float) -> np.ndarray:
    """The 2x2 (G, E) block of H_NH(g)."""
    return np.array([[-epsilon, -w * math.exp(-g)],
                     [-w * math.exp(g), epsilon]], dtype=np.complex128)


def pump_block(params: WalkParams) -> np.ndarray:
    """exp(-i M) for the traceless 2x2 block M, using M @ M = (eps^2 + w^2) I."""
    m = nonhermitian_block(params.epsilon, params.w, params.g)
    lam = math.hypot(params.epsilon, params.w)
    sinc = math.sin(lam) / lam if lam > 0 else 1.0
    return math.cos(lam) * np.eye(2, dtype=np.complex128) - 1j * sinc * m


def pump_step_matrix(params: WalkParams, dimension: int = 1) -> np.ndarray:
    """exp(-i H_NH(g)) on the full internal space (4x4 in 1D, 8x8 in 2D)."""
    directions = 2 if dimension == 1 else 4
    return np.kron(pump_block(params), np.eye(directions))


def coin_matrix(theta_G: float, theta_E: float) -> np.ndarray:
    """exp(-i H_C): an (L, R) rotation per energy sector."""
    out = np.zeros((4, 4))
    for offset, theta in ((0, theta_G), (2, theta_E)):
        c, s = math.cos(theta), math.sin(theta)
        out[offset:offset + 2, offset:offset + 2] = [[c, -s], [s, c]]
    return out


def apply_step_1d(state: WaveFunction, params: WalkParams, profile: ThetaProfile) -> WaveFunction:
    """One step N, then C, then S."""
    lattice = state.lattice
    if lattice.dimension != 1:
        raise ValueError("apply_step_1d needs a 1D state")
    if profile.theta_G.shape != (lattice.extent_x,) or profile.theta_E.shape != (lattice.extent_x,):
        raise ValueError("profile does not match the state's lattice")
    return WaveFunction(_step_1d_arrays(state.grid, params, profile), lattice)


def _step_1d_arrays(grid: np.ndarray, params: WalkParams, profile: ThetaProfile) -> np.ndarray:
    return _kernels.step_1d(
        np.ascontiguousarray(grid), pump_block(params),
        np.cos(profile.theta_G), np.sin(profile.theta_G),
        np.cos(profile.theta_E), np.sin(profile.theta_E),
    )


class Stepper1D:
    """Caches the trig tables so repeated steps skip recomputation."""

    def __init__(self, params: WalkParams, lattice: LatticeSpec, profile: ThetaProfile | None = None):
        self.params = params
        self.lattice = lattice
        self.profile = profile if profile is not None else theta_profile_1d(params, lattice)
        self._args = (
            pump_block(params),
            np.cos(self.profile.theta_G), np.sin(self.profile.theta_G),
            np.cos(self.profile.theta_E), np.sin(self.profile.theta_E),
        )

    def apply_grid(self, grid: np.ndarray) -> np.ndarray:
        return _kernels.step_1d(grid, *self._args)

    def __call__(self, state: WaveFunction) -> WaveFunction:
        return WaveFunction(self.apply_grid(state.grid), state.lattice)


def _rotation_blocks(c: np.ndarray, s: np.ndarray) -> np.ndarray:
    blocks = np.zeros(c.shape + (2, 2))
    blocks[..., 0, 0] = c
    blocks[..., 0, 1] = -s
    blocks[..., 1, 0] = s
    blocks[..., 1, 1] = c
    return blocks


def sparse_step_matrix_1d(params: WalkParams, lattice: LatticeSpec,
                          profile: ThetaProfile | None = None) -> sp.csr_matrix:
    """Sparse U assembled as the product of sparse S, C and N factors."""
    if profile is None:
        profile = theta_profile_1d(params, lattice)
    n = lattice.extent_x
    eye = sp.identity(n, format="csr")
    pump = sp.kron(eye, sp.csr_matrix(pump_step_matrix(params, 1)), format="csr")
    blocks = np.zeros((n, 4, 4))
    blocks[:, :2, :2] = _rotation_blocks(np.cos(profile.theta_G), np.sin(profile.theta_G))
    blocks[:, 2:, 2:] = _rotation_blocks(np.cos(profile.theta_E), np.sin(profile.theta_E))
    coin = sp.bsr_matrix((blocks, np.arange(n), np.arange(n + 1)), shape=(4 * n, 4 * n)).tocsr()
    sites = np.arange(n)
    rows = []
    for k in range(4):
        target = (sites - 1) % n if k % 2 == 0 else (sites + 1) % n
        rows.append(target * 4 + k)
    cols = (sites[None, :] * 4 + np.arange(4)[:, None]).ravel()
    shift = sp.csr_matrix((np.ones(4 * n), (np.concatenate(rows), cols)), shape=(4 * n, 4 * n))
    return (shift @ coin @ pump).tocsr()
