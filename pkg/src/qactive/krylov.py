"""Restarted Krylov-Schur iteration for the largest-magnitude eigenvalues.

Used with a shift-invert operator, the dominant eigenvalues mu map to the
eigenvalues sigma + 1/mu closest to the shift sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla


@dataclass
class KrylovResult:
    values: np.ndarray  # Ritz values, dominant first
    vectors: np.ndarray  # columns, unit norm
    residuals: np.ndarray  # Ritz residual estimates |beta * y_m|
    restarts: int
    matvecs: int
    converged: bool


def _orthogonalize(basis: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # classical Gram-Schmidt with one reorthogonalisation pass
    h = basis.conj().T @ w
    w = w - basis @ h
    h2 = basis.conj().T @ w
    w = w - basis @ h2
    return w, h + h2


def _sort_leading(T, Z, size, count):
    """Reorder the Schur form so the ``count`` largest |values| of the leading block come first."""
    mags = np.abs(np.diag(T)[:size])
    threshold = np.sort(mags)[::-1][count - 1] * (1 - 1e-12)
    Ts, Q, sdim = sla.schur(T[:size, :size], output="complex", sort=lambda z: abs(z) >= threshold)
    T = T.copy()
    Z = Z.copy()
    T[:size, size:] = Q.conj().T @ T[:size, size:]
    T[:size, :size] = Ts
    Z[:, :size] = Z[:, :size] @ Q
    return T, Z, sdim


def krylov_schur(apply: Callable[[np.ndarray], np.ndarray], v0: np.ndarray, nev: int = 1,
                 ncv: int = 60, max_restarts: int = 200, tol: float = 1e-12,
                 rng: np.random.Generator | None = None) -> KrylovResult:
    """Dominant eigenpairs of the linear map ``apply``.

    Convergence requires ``|beta * y_m| <= tol * |mu|`` for each of the
    ``nev`` wanted Ritz pairs.
    """
    n = v0.size
    ncv = min(ncv, n - 1)
    nev = min(nev, ncv - 1) if ncv > 1 else 1
    keep = min(max(nev + (ncv - nev) // 2, nev + 1), ncv - 1) if ncv > 2 else nev
    rng = rng if rng is not None else np.random.default_rng(0)

    V = np.zeros((n, ncv + 1), dtype=np.complex128)
    H = np.zeros((ncv + 1, ncv), dtype=np.complex128)
    V[:, 0] = v0 / np.linalg.norm(v0)
    k = 0
    matvecs = 0
    mu = vecs = res = None

    for restart in range(max_restarts + 1):
        for j in range(k, ncv):
            w = apply(V[:, j])
            matvecs += 1
            w, h = _orthogonalize(V[:, : j + 1], w)
            H[: j + 1, j] = h
            beta = np.linalg.norm(w)
            if beta <= 1e-14 * np.linalg.norm(h):
                # invariant subspace: continue from a fresh orthogonal direction
                H[j + 1, j] = 0.0
                w, _ = _orthogonalize(V[:, : j + 1], rng.standard_normal(n) + 0j)
                V[:, j + 1] = w / np.linalg.norm(w)
            else:
                H[j + 1, j] = beta
                V[:, j + 1] = w / beta

        m = ncv
        T, Z = sla.schur(H[:m, :m], output="complex")
        T, Z, p = _sort_leading(T, Z, m, keep)
        T, Z, _ = _sort_leading(T, Z, p, nev)
        p = min(p, m - 1)
        # residual coupling row after the rotation
        b = H[m, m - 1] * Z[m - 1, :]

        evals, evecs = np.linalg.eig(T[:nev, :nev])
        rank = np.argsort(-np.abs(evals), kind="stable")
        evals = evals[rank]
        evecs = evecs[:, rank]
        y = Z[:, :nev] @ evecs
        y /= np.linalg.norm(y, axis=0)
        res = np.abs(H[m, m - 1] * y[m - 1, :])
        mu = evals
        vecs = V[:, :m] @ y
        if np.all(res <= tol * np.abs(mu)):
            return KrylovResult(mu, vecs, res, restart, matvecs, True)
        if restart == max_restarts:
            break

        V[:, :p] = V[:, :m] @ Z[:, :p]
        V[:, p] = V[:, m]
        H[:] = 0.0
        H[:p, :p] = T[:p, :p]
        H[p, :p] = b[:p]
        k = p

    return KrylovResult(mu, vecs, res, max_restarts, matvecs, False)
