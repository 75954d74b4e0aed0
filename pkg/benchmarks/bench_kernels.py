"""Time the numba and NumPy step kernels on the preset lattice sizes.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from qactive import _backend
from qactive.gauge import make_stepper
from qactive.lattice import LatticeSpec
from qactive.walk1d import WalkParams

CASES = [
    ("1D L=801, 400 steps", LatticeSpec.one_d(801), WalkParams.preset_1d(1.0), 400),
    ("2D 71x71, 100 steps", LatticeSpec.two_d(71), WalkParams.preset_2d(1.0), 100),
]


def run(step, grid, steps):
    for _ in range(steps):
        grid = step.apply_grid(grid)
    return grid


def best_time(step, grid, steps, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run(step, grid, steps)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = [b for b in _backend.BACKENDS if b != "numba" or _backend.HAVE_NUMBA]
    rng = np.random.default_rng(0)
    print(f"{'case':<24}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'max diff':>12}")
    for label, lat, params, steps in CASES:
        shape = lat.shape + (lat.internal_dim,)
        grid = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        step = make_stepper(params, lat)
        times, outs = {}, {}
        for name in backends:
            with _backend.use_backend(name):
                run(step, grid, 1)  # compile / warm caches
                times[name], outs[name] = best_time(step, grid, steps, args.repeat)
        row = f"{label:<24}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            diff = np.abs(outs["numba"] - outs["numpy"]).max() / np.abs(outs["numpy"]).max()
            row += f"{times['numpy'] / times['numba']:>9.1f}x{diff:>12.1e}"
        print(row)


if __name__ == "__main__":
    main()
