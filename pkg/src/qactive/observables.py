"""Time stepping and the recorded observables."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .gauge import EigenPair, make_stepper
from .lattice import LatticeSpec, WaveFunction, apply_plane_wave, translate
from .walk1d import WalkParams

log = logging.getLogger(__name__)


class NumericalBlowUp(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"non-finite amplitude at step {step}")
        self.step = step


@dataclass(frozen=True)
class SectorDensity:
    """Per-site probabilities; ``ground``/``excited`` are sector marginals."""

    total: np.ndarray
    ground: np.ndarray
    excited: np.ndarray


@dataclass(frozen=True)
class ObservableRecord:
    step: int
    total_probability: float
    mean: tuple[float, ...]
    std_dev: tuple[float, ...]
    survival: float | None = None
    survival_raw: float | None = None
    ground_probability: float = 0.0
    excited_probability: float = 0.0
    # renormalised within each sector, one entry per axis
    ground_mean: tuple[float, ...] = ()
    ground_std: tuple[float, ...] = ()
    excited_mean: tuple[float, ...] = ()
    excited_std: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class DensitySnapshot:
    step: int
    ground: np.ndarray
    excited: np.ndarray
    total: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total", self.ground + self.excited)


def probability_density(state: WaveFunction) -> SectorDensity:
    """P(site) summed over internal states, plus ground and excited marginals."""
    grid = state.grid
    weights = grid.real**2 + grid.imag**2
    half = state.lattice.internal_dim // 2
    ground = weights[..., :half].sum(axis=-1)
    excited = weights[..., half:].sum(axis=-1)
    return SectorDensity(ground + excited, ground, excited)


def normalized_density(density) -> np.ndarray:
    """P / sum(P). Accepts a state, a :class:`SectorDensity` or an array."""
    if isinstance(density, WaveFunction):
        density = probability_density(density).total
    elif isinstance(density, SectorDensity):
        density = density.total
    density = np.asarray(density, dtype=float)
    total = density.sum()
    if not total > 0:
        raise ValueError("total probability must be positive to normalise")
    return density / total


def mean_and_stddev(density: np.ndarray, lattice: LatticeSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """First moment and root second central moment along each axis."""
    density = np.asarray(density, dtype=float)
    if density.shape != lattice.shape:
        raise ValueError(f"density shape {density.shape} != lattice shape {lattice.shape}")
    means, stds = [], []
    for axis in range(lattice.dimension):
        other = tuple(a for a in range(lattice.dimension) if a != axis)
        marginal = density.sum(axis=other) if other else density
        coords = lattice.coords(axis)
        mean = float(np.dot(coords, marginal))
        var = float(np.dot((coords - mean) ** 2, marginal))
        means.append(mean)
        stds.append(float(np.sqrt(max(var, 0.0))))
    return tuple(means), tuple(stds)


def survival_probability(density: np.ndarray, lattice: LatticeSpec, region: tuple[int, int]) -> float:
    """Weight of ``density`` on sites x_lo <= x <= x_hi (x axis)."""
    lo, hi = region
    if lo > hi:
        raise ValueError(f"empty survival region [{lo}, {hi}]")
    coords = lattice.coords(0)
    if lo < coords[0] or hi > coords[-1]:
        raise ValueError(f"region [{lo}, {hi}] outside the lattice")
    density = np.asarray(density, dtype=float)
    mask = (coords >= lo) & (coords <= hi)
    if lattice.dimension == 1:
        return float(density[mask].sum())
    return float(density[mask, :].sum())


def _sector_moments(sector: np.ndarray, lattice: LatticeSpec):
    total = sector.sum()
    if not total > 0:
        nan = tuple(float("nan") for _ in range(lattice.dimension))
        return nan, nan
    return mean_and_stddev(sector / total, lattice)


def record_for(step: int, state: WaveFunction,
               survival_region: tuple[int, int] | None = None) -> ObservableRecord:
    lattice = state.lattice
    dens = probability_density(state)
    total = float(dens.total.sum())
    normed = normalized_density(dens)
    mean, std = mean_and_stddev(normed, lattice)
    survival = survival_raw = None
    if survival_region is not None:
        survival = survival_probability(normed, lattice, survival_region)
        survival_raw = survival_probability(dens.total, lattice, survival_region)
    g_mean, g_std = _sector_moments(dens.ground, lattice)
    e_mean, e_std = _sector_moments(dens.excited, lattice)
    return ObservableRecord(
        step=step, total_probability=total, mean=mean, std_dev=std,
        survival=survival, survival_raw=survival_raw,
        ground_probability=float(dens.ground.sum()), excited_probability=float(dens.excited.sum()),
        ground_mean=g_mean, ground_std=g_std, excited_mean=e_mean, excited_std=e_std,
    )


def _boundary_weight(normed: np.ndarray, width: int = 2) -> float:
    mask = np.zeros(normed.shape, dtype=bool)
    for axis in range(normed.ndim):
        index = [slice(None)] * normed.ndim
        index[axis] = slice(0, width)
        mask[tuple(index)] = True
        index[axis] = slice(-width, None)
        mask[tuple(index)] = True
    return float(normed[mask].sum())


def evolve_and_record(initial: WaveFunction, params: WalkParams, steps: int,
                      snapshot_steps=(), survival_region: tuple[int, int] | None = None,
                      stepper=None):
    """Apply the one-step operator ``steps`` times.

    Returns (records, snapshots). ``records[T]`` describes the state after
    T steps, so ``records[0]`` is the initial state.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    lattice = initial.lattice
    stepper = stepper if stepper is not None else make_stepper(params, lattice)
    wanted = set(int(s) for s in snapshot_steps)
    records, snapshots = [], []
    grid = np.ascontiguousarray(initial.grid)
    warned = False
    for t in range(steps + 1):
        if t > 0:
            grid = stepper.apply_grid(grid)
        state = WaveFunction(grid, lattice)
        if not np.all(np.isfinite(grid)):
            raise NumericalBlowUp(t)
        rec = record_for(t, state, survival_region)
        records.append(rec)
        if t in wanted:
            dens = probability_density(state)
            snapshots.append(DensitySnapshot(t, dens.ground, dens.excited))
        if not warned:
            edge = _boundary_weight(normalized_density(state))
            if edge > 0.01:
                log.warning("step %d: %.3g of the probability is within 2 sites of the boundary; "
                            "moments ignore the periodic wrap", t, edge)
                warned = True
    return records, snapshots


def prepare_initial_1d(pair: EigenPair, delta_x: int) -> WaveFunction:
    return translate(pair.right_vector, (delta_x,)).normalized()


def prepare_initial_2d(pair: EigenPair, delta=(0, 0), k=(0.0, 0.0)) -> WaveFunction:
    shifted = translate(pair.right_vector, tuple(delta))
    return apply_plane_wave(shifted, k).normalized()
