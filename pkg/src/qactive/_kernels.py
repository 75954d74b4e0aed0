"""One-step evolution kernels, numba and NumPy twins.

Layouts: 1D amplitudes are ``(Lx, 4)`` ordered (LG, RG, LE, RE); 2D amplitudes
are ``(Lx, Ly, 8)`` ordered (LDG, RDG, LUG, RUG, LDE, RDE, LUE, RUE). The pump
block ``pump`` is the 2x2 matrix exp(-i H) acting on (G, E).

Every kernel returns a fresh array and never touches its input.
"""

from __future__ import annotations

import numpy as np

from ._backend import get_backend, njit


# ---------------------------------------------------------------------------
# 1D
# ---------------------------------------------------------------------------


@njit(cache=True)
def _step_1d_numba(psi, pump, cg, sg, ce, se):
    n = psi.shape[0]
    out = np.empty_like(psi)
    p00 = pump[0, 0]
    p01 = pump[0, 1]
    p10 = pump[1, 0]
    p11 = pump[1, 1]
    for i in range(n):
        lg = psi[i, 0]
        rg = psi[i, 1]
        le = psi[i, 2]
        re = psi[i, 3]
        lg1 = p00 * lg + p01 * le
        le1 = p10 * lg + p11 * le
        rg1 = p00 * rg + p01 * re
        re1 = p10 * rg + p11 * re
        left = i - 1 if i > 0 else n - 1
        right = i + 1 if i < n - 1 else 0
        out[left, 0] = cg[i] * lg1 - sg[i] * rg1
        out[right, 1] = sg[i] * lg1 + cg[i] * rg1
        out[left, 2] = ce[i] * le1 - se[i] * re1
        out[right, 3] = se[i] * le1 + ce[i] * re1
    return out


def _step_1d_numpy(psi, pump, cg, sg, ce, se):
    lg, rg, le, re = psi[:, 0], psi[:, 1], psi[:, 2], psi[:, 3]
    lg1 = pump[0, 0] * lg + pump[0, 1] * le
    le1 = pump[1, 0] * lg + pump[1, 1] * le
    rg1 = pump[0, 0] * rg + pump[0, 1] * re
    re1 = pump[1, 0] * rg + pump[1, 1] * re
    out = np.empty_like(psi)
    out[:, 0] = np.roll(cg * lg1 - sg * rg1, -1)
    out[:, 1] = np.roll(sg * lg1 + cg * rg1, 1)
    out[:, 2] = np.roll(ce * le1 - se * re1, -1)
    out[:, 3] = np.roll(se * le1 + ce * re1, 1)
    return out


def step_1d(psi, pump, cg, sg, ce, se):
    """S C N applied to a ``(Lx, 4)`` amplitude array."""
    if get_backend() == "numba":
        return _step_1d_numba(psi, pump, cg, sg, ce, se)
    return _step_1d_numpy(psi, pump, cg, sg, ce, se)


# ---------------------------------------------------------------------------
# 2D
# ---------------------------------------------------------------------------


@njit(cache=True)
def _step_2d_numba(psi, pump, cxg, sxg, cxe, sxe, cyg, syg, cye, sye):
    nx = psi.shape[0]
    ny = psi.shape[1]
    mid = np.empty_like(psi)
    p00 = pump[0, 0]
    p01 = pump[0, 1]
    p10 = pump[1, 0]
    p11 = pump[1, 1]
    # N, C_x, then S_x (L components to x-1, R components to x+1)
    for i in range(nx):
        left = i - 1 if i > 0 else nx - 1
        right = i + 1 if i < nx - 1 else 0
        for j in range(ny):
            for d in range(0, 4, 2):
                gl = psi[i, j, d]
                gr = psi[i, j, d + 1]
                el = psi[i, j, d + 4]
                er = psi[i, j, d + 5]
                gl1 = p00 * gl + p01 * el
                el1 = p10 * gl + p11 * el
                gr1 = p00 * gr + p01 * er
                er1 = p10 * gr + p11 * er
                mid[left, j, d] = cxg[i] * gl1 - sxg[i] * gr1
                mid[right, j, d + 1] = sxg[i] * gl1 + cxg[i] * gr1
                mid[left, j, d + 4] = cxe[i] * el1 - sxe[i] * er1
                mid[right, j, d + 5] = sxe[i] * el1 + cxe[i] * er1
    # C_y in place
    for i in range(nx):
        for j in range(ny):
            for h in range(2):
                o = 4 * h
                if h == 0:
                    c = cyg[j]
                    s = syg[j]
                else:
                    c = cye[j]
                    s = sye[j]
                a0 = mid[i, j, o]
                a1 = mid[i, j, o + 1]
                a2 = mid[i, j, o + 2]
                a3 = mid[i, j, o + 3]
                mid[i, j, o] = c * a0 - s * a3
                mid[i, j, o + 1] = c * a1 - s * a2
                mid[i, j, o + 2] = s * a1 + c * a2
                mid[i, j, o + 3] = s * a0 + c * a3
    # S_y gathered: content of row j+1 arrives via P_y + Q_y, row j-1 via P_y - Q_y
    out = np.empty_like(psi)
    for i in range(nx):
        for j in range(ny):
            up = j + 1 if j < ny - 1 else 0
            down = j - 1 if j > 0 else ny - 1
            for h in range(2):
                o = 4 * h
                plus_d = 0.5 * (mid[i, up, o] + mid[i, up, o + 1])
                minus_d = 0.5 * (mid[i, down, o] - mid[i, down, o + 1])
                out[i, j, o] = plus_d + minus_d
                out[i, j, o + 1] = plus_d - minus_d
                minus_u = 0.5 * (mid[i, up, o + 2] - mid[i, up, o + 3])
                plus_u = 0.5 * (mid[i, down, o + 2] + mid[i, down, o + 3])
                out[i, j, o + 2] = minus_u + plus_u
                out[i, j, o + 3] = plus_u - minus_u
    return out


def _step_2d_numpy(psi, pump, cxg, sxg, cxe, sxe, cyg, syg, cye, sye):
    g = psi[..., :4]
    e = psi[..., 4:]
    g1 = pump[0, 0] * g + pump[0, 1] * e
    e1 = pump[1, 0] * g + pump[1, 1] * e

    def coin_x(a, c, s):
        c = c[:, None]
        s = s[:, None]
        out = np.empty_like(a)
        out[..., 0] = c * a[..., 0] - s * a[..., 1]
        out[..., 1] = s * a[..., 0] + c * a[..., 1]
        out[..., 2] = c * a[..., 2] - s * a[..., 3]
        out[..., 3] = s * a[..., 2] + c * a[..., 3]
        return out

    def coin_y(a, c, s):
        c = c[None, :]
        s = s[None, :]
        out = np.empty_like(a)
        out[..., 0] = c * a[..., 0] - s * a[..., 3]
        out[..., 1] = c * a[..., 1] - s * a[..., 2]
        out[..., 2] = s * a[..., 1] + c * a[..., 2]
        out[..., 3] = s * a[..., 0] + c * a[..., 3]
        return out

    mid = np.empty_like(psi)
    mid[..., :4] = coin_x(g1, cxg, sxg)
    mid[..., 4:] = coin_x(e1, cxe, sxe)
    left = [0, 2, 4, 6]
    right = [1, 3, 5, 7]
    mid[..., left] = np.roll(mid[..., left], -1, axis=0)
    mid[..., right] = np.roll(mid[..., right], 1, axis=0)
    mid[..., :4] = coin_y(mid[..., :4], cyg, syg)
    mid[..., 4:] = coin_y(mid[..., 4:], cye, sye)

    up = np.roll(mid, -1, axis=1)
    down = np.roll(mid, 1, axis=1)
    out = np.empty_like(psi)
    for o in (0, 4):
        plus_d = 0.5 * (up[..., o] + up[..., o + 1])
        minus_d = 0.5 * (down[..., o] - down[..., o + 1])
        out[..., o] = plus_d + minus_d
        out[..., o + 1] = plus_d - minus_d
        minus_u = 0.5 * (up[..., o + 2] - up[..., o + 3])
        plus_u = 0.5 * (down[..., o + 2] + down[..., o + 3])
        out[..., o + 2] = minus_u + plus_u
        out[..., o + 3] = plus_u - minus_u
    return out


def step_2d(psi, pump, cxg, sxg, cxe, sxe, cyg, syg, cye, sye):
    """S_y C_y S_x C_x N applied to a ``(Lx, Ly, 8)`` amplitude array."""
    if get_backend() == "numba":
        return _step_2d_numba(psi, pump, cxg, sxg, cxe, sxe, cyg, syg, cye, sye)
    return _step_2d_numpy(psi, pump, cxg, sxg, cxe, sxe, cyg, syg, cye, sye)
