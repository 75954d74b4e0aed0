"""Imaginary gauge map, dense spectra and the targeted eigensolver."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .krylov import krylov_schur
from .lattice import LatticeSpec, WaveFunction
from .walk1d import Stepper1D, WalkParams, check_g, sparse_step_matrix_1d
from .walk2d import Stepper2D, sparse_step_matrix_2d

DENSE_LIMIT = 10_000


class SpectrumError(RuntimeError):
    """Dense eigensolver failure; ``partial`` holds what was computed."""

    def __init__(self, message, partial=None, valid=None):
        super().__init__(message)
        self.partial = partial
        self.valid = valid


class EigenSolverError(RuntimeError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class GaugeMap:
    """A(g): ground amplitudes times exp(-g/2), excited amplitudes times exp(+g/2)."""

    g: float

    def __post_init__(self):
        object.__setattr__(self, "g", check_g(self.g))

    def factors(self, internal_dim: int) -> np.ndarray:
        half = internal_dim // 2
        return np.concatenate([np.full(half, math.exp(-self.g / 2)),
                               np.full(half, math.exp(self.g / 2))])

    def matrix(self, lattice: LatticeSpec) -> np.ndarray:
        return np.diag(np.tile(self.factors(lattice.internal_dim), lattice.num_sites))

    def inverse(self) -> "GaugeMap":
        return GaugeMap(-self.g)

    def __call__(self, state: WaveFunction) -> WaveFunction:
        return WaveFunction(state.amplitudes * self.factors(state.lattice.internal_dim), state.lattice)


def apply_gauge(state: WaveFunction, g: float, direction: str = "forward") -> WaveFunction:
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    gauge = GaugeMap(g)
    return (gauge if direction == "forward" else gauge.inverse())(state)


def make_stepper(params: WalkParams, lattice: LatticeSpec):
    if lattice.dimension == 1:
        return Stepper1D(params, lattice)
    return Stepper2D(params, lattice)


def sparse_step_matrix(params: WalkParams, lattice: LatticeSpec) -> sp.csr_matrix:
    if lattice.dimension == 1:
        return sparse_step_matrix_1d(params, lattice)
    return sparse_step_matrix_2d(params, lattice)


def dense_evolution_matrix(params: WalkParams, lattice: LatticeSpec,
                           max_dim: int = DENSE_LIMIT) -> np.ndarray:
    """Columns are the matrix-free images of the basis vectors."""
    n = lattice.size
    if n > max_dim:
        raise ValueError(f"dense assembly of dimension {n} exceeds the limit {max_dim}")
    stepper = make_stepper(params, lattice)
    shape = lattice.shape + (lattice.internal_dim,)
    out = np.empty((n, n), dtype=np.complex128)
    basis = np.zeros(n, dtype=np.complex128)
    for j in range(n):
        basis[j] = 1.0
        out[:, j] = stepper.apply_grid(basis.reshape(shape)).reshape(-1)
        basis[j] = 0.0
    return out


def dense_spectrum(matrix: np.ndarray, residual_tol: float = 1e-9,
                   max_dim: int = DENSE_LIMIT) -> np.ndarray:
    """All eigenvalues of a dense matrix, sorted by argument then modulus.

    Each eigenpair is residual-checked; any failure raises
    :class:`SpectrumError` carrying the partial result and a validity mask.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    if matrix.shape[0] > max_dim:
        raise ValueError(f"dimension {matrix.shape[0]} exceeds the limit {max_dim}")
    try:
        values, vectors = sla.eig(matrix)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(f"eigenvalue iteration did not converge: {exc}") from exc
    scale = max(np.linalg.norm(matrix, 2), 1.0)
    residuals = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
    valid = residuals <= residual_tol * scale * np.linalg.norm(vectors, axis=0)
    order = np.lexsort((np.abs(values), np.angle(values)))
    if not np.all(valid):
        raise SpectrumError(f"{np.count_nonzero(~valid)} eigenpairs failed the residual check",
                            partial=values[order], valid=valid[order])
    return values[order]


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: complex
    right_vector: WaveFunction
    residual: float
    left_vector: WaveFunction | None = None
    target: complex | None = None
    g: float = 0.0
    restarts: int = 0
    matvecs: int = 0


def residual_norm(stepper, state: WaveFunction, eigenvalue: complex) -> float:
    image = stepper.apply_grid(state.grid)
    return float(np.linalg.norm(image - eigenvalue * state.grid) / np.linalg.norm(state.grid))


def find_eigenpair(params: WalkParams, lattice: LatticeSpec, target: complex,
                   tol: float = 1e-10, ncv: int = 60, max_restarts: int = 200,
                   seed: int = 0, max_distance: float = 0.1) -> EigenPair:
    """Eigenpair of the one-step operator whose eigenvalue is closest to ``target``.

    The search runs at g = 0, where the operator is unitary, with a
    shift-invert Krylov-Schur iteration on a sparse LU of (U - target).
    For g != 0 the vector is mapped through A(g), which keeps the eigenvalue.
    The returned residual is recomputed with the matrix-free step.
    """
    target = complex(target)
    if abs(abs(target) - 1.0) > 1e-6:
        raise ValueError(f"target must lie on the unit circle, |target| = {abs(target)}")
    g = check_g(params.g)
    params0 = params.with_g(0.0)
    inner_tol = tol * math.exp(-abs(g))

    matrix = sparse_step_matrix(params0, lattice).tocsc()
    shift = target
    try:
        lu = spla.splu(matrix - shift * sp.identity(matrix.shape[0], format="csc"))
    except RuntimeError:
        shift = target * complex(1.0, 1e-12)
        lu = spla.splu(matrix - shift * sp.identity(matrix.shape[0], format="csc"))

    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(lattice.size) + 1j * rng.standard_normal(lattice.size)
    result = krylov_schur(lu.solve, v0, nev=1, ncv=ncv, max_restarts=max_restarts,
                          tol=inner_tol / 4, rng=rng)

    stepper0 = make_stepper(params0, lattice)
    vec = result.vectors[:, 0]
    vec = vec / np.linalg.norm(vec)
    state = WaveFunction.from_vector(vec, lattice)
    value = complex(np.vdot(vec, stepper0.apply_grid(state.grid).reshape(-1)))
    residual = residual_norm(stepper0, state, value)
    # inverse-iteration polish with the existing factorisation
    for _ in range(5):
        if residual <= inner_tol:
            break
        vec = lu.solve(vec)
        vec /= np.linalg.norm(vec)
        state = WaveFunction.from_vector(vec, lattice)
        value = complex(np.vdot(vec, stepper0.apply_grid(state.grid).reshape(-1)))
        residual = residual_norm(stepper0, state, value)

    pair = EigenPair(value, state, residual, target=target, g=0.0,
                     restarts=result.restarts, matvecs=result.matvecs)
    if abs(value - target) > max_distance:
        raise EigenSolverError(
            f"closest eigenvalue {value} is {abs(value - target):.3g} from the target", best=pair)
    if residual > inner_tol:
        raise EigenSolverError(f"residual {residual:.3g} above tolerance {inner_tol:.3g}", best=pair)
    if g == 0.0:
        return pair

    right = GaugeMap(g)(state).normalized()
    residual_g = residual_norm(make_stepper(params, lattice), right, value)
    pair = EigenPair(value, right, residual_g, target=target, g=g,
                     restarts=result.restarts, matvecs=result.matvecs)
    if residual_g > tol:
        raise EigenSolverError(f"residual {residual_g:.3g} above tolerance {tol:.3g} at g={g}",
                               best=pair)
    return pair


def left_vector_for(pair: EigenPair, g: float | None = None) -> WaveFunction:
    """Left eigenvector A(g)^-2 |R>, scaled so that <L|R> = 1."""
    g = pair.g if g is None else check_g(g)
    right = pair.right_vector
    left = _scale_sectors(right, -2.0 * g)
    overlap = np.vdot(left.vector, right.vector).real
    if not overlap > 1e-300:
        raise ValueError(f"vanishing left/right overlap {overlap}")
    return left.scaled(1.0 / overlap)


def _scale_sectors(state: WaveFunction, g: float) -> WaveFunction:
    half = state.lattice.internal_dim // 2
    factors = np.concatenate([np.full(half, math.exp(-g / 2)), np.full(half, math.exp(g / 2))])
    return WaveFunction(state.amplitudes * factors, state.lattice)


def with_left_vector(pair: EigenPair, g: float | None = None) -> EigenPair:
    return EigenPair(pair.eigenvalue, pair.right_vector, pair.residual,
                     left_vector=left_vector_for(pair, g), target=pair.target, g=pair.g,
                     restarts=pair.restarts, matvecs=pair.matvecs)
