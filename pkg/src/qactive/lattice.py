"""Lattice geometry, internal basis and wavefunction storage."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# 1D internal order: index = 2*(G/E bit) + (L/R bit)
BASIS_1D = ("LG", "RG", "LE", "RE")
# 2D internal order: index = 4*(G/E bit) + 2*(D/U bit) + (L/R bit)
BASIS_2D = ("LDG", "RDG", "LUG", "RUG", "LDE", "RDE", "LUE", "RUE")


def encode_internal(lr: int, ge: int, du: int | None = None) -> int:
    """Internal index from sector bits (L=0/R=1, G=0/E=1, D=0/U=1)."""
    for bit in (lr, ge) + (() if du is None else (du,)):
        if bit not in (0, 1):
            raise ValueError(f"sector bits must be 0 or 1, got {bit}")
    if du is None:
        return 2 * ge + lr
    return 4 * ge + 2 * du + lr


def decode_internal(index: int, dimension: int) -> tuple[int, ...]:
    """Inverse of :func:`encode_internal`; returns (lr, ge) or (lr, ge, du)."""
    size = 4 if dimension == 1 else 8
    if not 0 <= index < size:
        raise ValueError(f"internal index {index} out of range for {dimension}D")
    if dimension == 1:
        return index & 1, index >> 1
    return index & 1, index >> 2, (index >> 1) & 1


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic square lattice with unit spacing and sites centred on 0.

    Sites run from ``-(L-1)/2`` to ``+(L-1)/2`` along each axis.
    """

    dimension: int
    extent_x: int
    extent_y: int | None = None

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        extents = [("extent_x", self.extent_x)]
        if self.dimension == 2:
            if self.extent_y is None:
                raise ValueError("extent_y is required for a 2D lattice")
            extents.append(("extent_y", self.extent_y))
        elif self.extent_y is not None:
            raise ValueError("extent_y must be None for a 1D lattice")
        for name, value in extents:
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 3 or value % 2 == 0:
                raise ValueError(f"{name} must be odd and >= 3, got {value}")

    @classmethod
    def one_d(cls, extent_x: int) -> "LatticeSpec":
        return cls(1, extent_x)

    @classmethod
    def two_d(cls, extent_x: int, extent_y: int | None = None) -> "LatticeSpec":
        return cls(2, extent_x, extent_x if extent_y is None else extent_y)

    @property
    def internal_dim(self) -> int:
        return 4 if self.dimension == 1 else 8

    @property
    def shape(self) -> tuple[int, ...]:
        if self.dimension == 1:
            return (self.extent_x,)
        return (self.extent_x, self.extent_y)

    @property
    def num_sites(self) -> int:
        return int(np.prod(self.shape))

    @property
    def size(self) -> int:
        """Total Hilbert-space dimension."""
        return self.num_sites * self.internal_dim

    def coords(self, axis: int = 0) -> np.ndarray:
        extent = self.shape[axis]
        half = (extent - 1) // 2
        return np.arange(-half, half + 1)

    def index_of(self, coord: int, axis: int = 0) -> int:
        half = (self.shape[axis] - 1) // 2
        if not -half <= coord <= half:
            raise ValueError(f"coordinate {coord} outside lattice axis {axis}")
        return coord + half

    def coord_of(self, index: int, axis: int = 0) -> int:
        extent = self.shape[axis]
        if not 0 <= index < extent:
            raise ValueError(f"index {index} outside lattice axis {axis}")
        return index - (extent - 1) // 2


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes of shape ``(num_sites, internal_dim)``.

    In 2D the site index is row-major with x slow and y fast, so
    ``grid`` returns an ``(Lx, Ly, 8)`` view.
    """

    amplitudes: np.ndarray
    lattice: LatticeSpec = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        expected = (self.lattice.num_sites, self.lattice.internal_dim)
        if amps.shape == self.lattice.shape + (self.lattice.internal_dim,):
            amps = amps.reshape(expected)
        if amps.shape != expected:
            raise ValueError(f"amplitudes shape {amps.shape} != expected {expected}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def grid(self) -> np.ndarray:
        return self.amplitudes.reshape(self.lattice.shape + (self.lattice.internal_dim,))

    @property
    def vector(self) -> np.ndarray:
        """Flat view; index = site * internal_dim + internal."""
        return self.amplitudes.reshape(-1)

    @classmethod
    def zeros(cls, lattice: LatticeSpec) -> "WaveFunction":
        return cls(np.zeros((lattice.num_sites, lattice.internal_dim), complex), lattice)

    @classmethod
    def from_vector(cls, vector: np.ndarray, lattice: LatticeSpec) -> "WaveFunction":
        return cls(np.asarray(vector).reshape(lattice.num_sites, lattice.internal_dim), lattice)

    @classmethod
    def delta(cls, lattice: LatticeSpec, site: tuple[int, ...] | int, internal: int,
              amplitude: complex = 1.0) -> "WaveFunction":
        """Single nonzero amplitude at the given site coordinates."""
        site = (site,) if np.isscalar(site) else tuple(site)
        grid = np.zeros(lattice.shape + (lattice.internal_dim,), complex)
        idx = tuple(lattice.index_of(c, axis) for axis, c in enumerate(site))
        grid[idx + (internal,)] = amplitude
        return cls(grid, lattice)

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.amplitudes.copy(), self.lattice)

    def scaled(self, factor: complex) -> "WaveFunction":
        return WaveFunction(self.amplitudes * factor, self.lattice)

    def normalized(self) -> "WaveFunction":
        norm = np.sqrt(total_norm_sq(self))
        if norm == 0.0:
            raise ValueError("cannot normalise the zero state")
        return self.scaled(1.0 / norm)


def total_norm_sq(state: WaveFunction) -> float:
    a = state.amplitudes
    return float(np.sum(a.real**2 + a.imag**2))


def translate(state: WaveFunction, delta) -> WaveFunction:
    """Move amplitudes by ``delta`` sites per axis with periodic wrap."""
    lattice = state.lattice
    delta = (delta,) if np.isscalar(delta) else tuple(delta)
    if len(delta) != lattice.dimension:
        raise ValueError(f"need {lattice.dimension} offsets, got {len(delta)}")
    for d, extent in zip(delta, lattice.shape):
        if abs(int(d)) >= extent:
            raise ValueError(f"offset {d} is ambiguous on an axis of extent {extent}")
    grid = np.roll(state.grid, shift=tuple(int(d) for d in delta),
                   axis=tuple(range(lattice.dimension)))
    return WaveFunction(grid, lattice)


def apply_plane_wave(state: WaveFunction, k) -> WaveFunction:
    """Multiply the amplitude at (x, y) by exp(i (kx x + ky y))."""
    lattice = state.lattice
    if lattice.dimension != 2:
        raise ValueError("apply_plane_wave needs a 2D state")
    kx, ky = k
    x = lattice.coords(0)[:, None]
    y = lattice.coords(1)[None, :]
    phase = np.exp(1j * (kx * x + ky * y))
    return WaveFunction(state.grid * phase[..., None], lattice)
