"""Two-dimensional walk: U = S_y C_y S_x C_x N(g) on eight internal states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .lattice import LatticeSpec, WaveFunction
from .walk1d import WalkParams, linear_potential, pump_block, pump_step_matrix


@dataclass(frozen=True, eq=False)
class ThetaProfile2D:
    theta_xG: np.ndarray
    theta_xE: np.ndarray
    theta_yG: np.ndarray
    theta_yE: np.ndarray


def theta_profiles_2d(params: WalkParams, lattice: LatticeSpec) -> ThetaProfile2D:
    # the y profile is a function of y alone, the same ramp as along x
    if lattice.dimension != 2:
        raise ValueError("theta_profiles_2d needs a 2D lattice")
    x = lattice.coords(0)
    y = lattice.coords(1)
    a, b = params.alpha, params.beta
    return ThetaProfile2D(
        linear_potential(params.theta_g, x, a, b),
        linear_potential(params.theta_e, x, a, b),
        linear_potential(params.theta_g, y, a, b),
        linear_potential(params.theta_e, y, a, b),
    )


def _coin_x_block(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0, 0],
                     [s, c, 0, 0],
                     [0, 0, c, -s],
                     [0, 0, s, c]])


def _coin_y_block(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0, 0, -s],
                     [0, c, -s, 0],
                     [0, s, c, 0],
                     [s, 0, 0, c]])


def coin_x_matrix(theta_xG: float, theta_xE: float) -> np.ndarray:
    """8x8 C_x(x): rotation within the (L, R) pair of each (D/U, G/E) sector."""
    out = np.zeros((8, 8))
    out[:4, :4] = _coin_x_block(theta_xG)
    out[4:, 4:] = _coin_x_block(theta_xE)
    return out


def coin_y_matrix(theta_yG: float, theta_yE: float) -> np.ndarray:
    """8x8 C_y(y): mixes LD with RU and RD with LU in each energy sector."""
    out = np.zeros((8, 8))
    out[:4, :4] = _coin_y_block(theta_yG)
    out[4:, 4:] = _coin_y_block(theta_yE)
    return out


def _require_2d(state: WaveFunction) -> None:
    if state.lattice.dimension != 2:
        raise ValueError("expected a 2D state")


def apply_shift_x(state: WaveFunction) -> WaveFunction:
    """L components one site towards -x, R components towards +x."""
    _require_2d(state)
    grid = state.grid
    out = np.empty_like(grid)
    out[..., 0::2] = np.roll(grid[..., 0::2], -1, axis=0)
    out[..., 1::2] = np.roll(grid[..., 1::2], 1, axis=0)
    return WaveFunction(out, state.lattice)


def apply_shift_y(state: WaveFunction) -> WaveFunction:
    """S_y with P_y +- Q_y resolved into single-site shifts along y.

    Down sector: (L+R)/2 moves to y-1 and (L-R)/2 to y+1. Up sector: (L-R)/2
    moves to y-1 and (L+R)/2 to y+1, entering R with opposite signs.
    """
    _require_2d(state)
    grid = state.grid
    up = np.roll(grid, -1, axis=1)
    down = np.roll(grid, 1, axis=1)
    out = np.empty_like(grid)
    for o in (0, 4):
        plus_d = 0.5 * (up[..., o] + up[..., o + 1])
        minus_d = 0.5 * (down[..., o] - down[..., o + 1])
        out[..., o] = plus_d + minus_d
        out[..., o + 1] = plus_d - minus_d
        minus_u = 0.5 * (up[..., o + 2] - up[..., o + 3])
        plus_u = 0.5 * (down[..., o + 2] + down[..., o + 3])
        out[..., o + 2] = minus_u + plus_u
        out[..., o + 3] = plus_u - minus_u
    return WaveFunction(out, state.lattice)


class Stepper2D:
    """One 2D step with cached trig tables."""

    def __init__(self, params: WalkParams, lattice: LatticeSpec,
                 profiles: ThetaProfile2D | None = None):
        if lattice.dimension != 2:
            raise ValueError("Stepper2D needs a 2D lattice")
        self.params = params
        self.lattice = lattice
        self.profiles = profiles if profiles is not None else theta_profiles_2d(params, lattice)
        p = self.profiles
        if p.theta_xG.shape != (lattice.extent_x,) or p.theta_yG.shape != (lattice.extent_y,):
            raise ValueError("profiles do not match the lattice")
        self._args = (
            pump_block(params),
            np.cos(p.theta_xG), np.sin(p.theta_xG), np.cos(p.theta_xE), np.sin(p.theta_xE),
            np.cos(p.theta_yG), np.sin(p.theta_yG), np.cos(p.theta_yE), np.sin(p.theta_yE),
        )

    def apply_grid(self, grid: np.ndarray) -> np.ndarray:
        return _kernels.step_2d(grid, *self._args)

    def __call__(self, state: WaveFunction) -> WaveFunction:
        if state.lattice != self.lattice:
            raise ValueError("state lattice does not match the stepper")
        return WaveFunction(self.apply_grid(state.grid), self.lattice)


def apply_step_2d(state: WaveFunction, params: WalkParams,
                  profiles: ThetaProfile2D) -> WaveFunction:
    _require_2d(state)
    return Stepper2D(params, state.lattice, profiles)(state)


def sparse_step_matrix_2d(params: WalkParams, lattice: LatticeSpec,
                          profiles: ThetaProfile2D | None = None) -> sp.csr_matrix:
    """Sparse U built from per-site 8x8 blocks and explicit shift matrices."""
    if profiles is None:
        profiles = theta_profiles_2d(params, lattice)
    nx, ny = lattice.extent_x, lattice.extent_y
    ns = nx * ny
    dim = 8 * ns
    ix, iy = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    ix = ix.ravel()
    iy = iy.ravel()

    pump = sp.kron(sp.identity(ns, format="csr"),
                   sp.csr_matrix(pump_step_matrix(params, 2)), format="csr")

    def block_diag(blocks):
        return sp.bsr_matrix((blocks, np.arange(ns), np.arange(ns + 1)), shape=(dim, dim)).tocsr()

    cx = np.array([coin_x_matrix(g, e) for g, e in zip(profiles.theta_xG, profiles.theta_xE)])
    cy = np.array([coin_y_matrix(g, e) for g, e in zip(profiles.theta_yG, profiles.theta_yE)])
    coin_x = block_diag(cx[ix])
    coin_y = block_diag(cy[iy])

    def site_shift(dx, dy):
        target = ((ix + dx) % nx) * ny + (iy + dy) % ny
        return sp.csr_matrix((np.ones(ns), (target, np.arange(ns))), shape=(ns, ns))

    def unit(i, j):
        return sp.csr_matrix(([1.0], ([i], [j])), shape=(8, 8))

    # P_x = |x-1><x|, Q_x = |x+1><x|
    p_x, q_x = site_shift(-1, 0), site_shift(1, 0)
    shift_x = sum(sp.kron(p_x if k % 2 == 0 else q_x, unit(k, k)) for k in range(8))

    # P_y, Q_y are half-sums of the two one-site moves along y
    to_down, to_up = site_shift(0, -1), site_shift(0, 1)
    p_y = 0.5 * (to_down + to_up)
    q_y = 0.5 * (to_down - to_up)
    pattern = {(0, 0): p_y, (0, 1): q_y, (1, 0): q_y, (1, 1): p_y,
               (2, 2): p_y, (2, 3): -q_y, (3, 2): -q_y, (3, 3): p_y}
    shift_y = sum(sp.kron(op, unit(4 * h + i, 4 * h + j))
                  for h in range(2) for (i, j), op in pattern.items())

    return (shift_y @ coin_y @ shift_x @ coin_x @ pump).tocsr()
