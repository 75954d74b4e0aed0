"""Machine-checkable acceptance suite.

Each check returns a :class:`CheckResult`; :func:`run_suite` prints one line
per check and reports whether all passed.
"""

from __future__ import annotations

import filecmp
import math
import tempfile
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from .biortho import TwoLevelHamiltonian, expectation_time_series, right_left_eigensystem
from .config import TARGET_1D, TARGET_2D, preset_config
from .experiment import run_experiment
from .gauge import (EigenSolverError, GaugeMap, dense_evolution_matrix, dense_spectrum,
                    find_eigenpair, make_stepper, sparse_step_matrix)
from .lattice import LatticeSpec, WaveFunction
from .observables import evolve_and_record, prepare_initial_1d, prepare_initial_2d
from .pump import RateModel, closed_form, integrate_rate_equations, stationary_ratio
from .walk1d import WalkParams


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str, limit: float | None = None):
    def wrap(fn: Callable[..., tuple[bool, str]]):
        def run(*args, **kwargs) -> CheckResult:
            start = time.perf_counter()
            try:
                passed, detail = fn(*args, **kwargs)
            except Exception as exc:  # a crashing check is a failing check
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - start
            if limit is not None and seconds >= limit:
                passed, detail = False, f"{detail}; runtime {seconds:.1f}s over {limit:g}s"
            return CheckResult(number, name, passed, detail, seconds)

        run.number = number
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@lru_cache(maxsize=None)
def _eigenpair_1d(extent: int):
    return find_eigenpair(WalkParams.preset_1d(0.0), LatticeSpec.one_d(extent), TARGET_1D,
                          tol=1e-10, max_distance=1.0)


@lru_cache(maxsize=None)
def _eigenpair_2d(extent: int):
    return find_eigenpair(WalkParams.preset_2d(0.0), LatticeSpec.two_d(extent), TARGET_2D,
                          tol=1e-9, max_distance=1.0)


@_timed(1, "unit-circle spectrum", limit=5.0)
def check_unit_circle():
    lat = LatticeSpec.one_d(21)
    spectra = [dense_spectrum(dense_evolution_matrix(WalkParams.preset_1d(g), lat)) for g in (0.0, 1.0)]
    off_circle = max(float(np.max(np.abs(np.abs(s) - 1.0))) for s in spectra)
    mismatch = float(np.max(np.abs(spectra[0] - spectra[1])))
    ok = off_circle <= 1e-9 and mismatch <= 1e-8
    return ok, f"max ||lambda|-1| = {off_circle:.2e} (<= 1e-9), g=1 vs g=0 = {mismatch:.2e} (<= 1e-8)"


def _eigen_check(pair_fn, extent, target, residual_bound):
    try:
        pair = pair_fn(extent)
    except EigenSolverError as exc:
        pair = exc.best
    dist = abs(pair.eigenvalue - target)
    ok = dist <= 1e-6 and pair.residual <= residual_bound
    return ok, (f"lambda = {pair.eigenvalue.real:.16f}{pair.eigenvalue.imag:+.16f}i, "
                f"|lambda - target| = {dist:.3e} (<= 1e-6), residual = {pair.residual:.2e} "
                f"(<= {residual_bound:g})")


@_timed(2, "1D eigenvalue at L=801", limit=120.0)
def check_eigen_1d():
    return _eigen_check(_eigenpair_1d, 801, TARGET_1D, 1e-10)


@_timed(3, "2D eigenvalue at 71x71", limit=600.0)
def check_eigen_2d():
    return _eigen_check(_eigenpair_2d, 71, TARGET_2D, 1e-9)


@_timed(4, "gauge similarity", limit=5.0)
def check_gauge():
    worst = []
    for lat, preset in ((LatticeSpec.one_d(11), WalkParams.preset_1d),
                        (LatticeSpec.two_d(3), WalkParams.preset_2d)):
        g = 1.0
        u_g = dense_evolution_matrix(preset(g), lat)
        u_0 = dense_evolution_matrix(preset(0.0), lat)
        a = GaugeMap(g).matrix(lat)
        a_inv = GaugeMap(-g).matrix(lat)
        worst.append(float(np.max(np.abs(a_inv @ u_g @ a - u_0))))
    return max(worst) <= 1e-12, f"max |A(-g)U(g)A(g) - U(0)| = {worst[0]:.2e} (1D), {worst[1]:.2e} (2D) (<= 1e-12)"


@_timed(5, "dense-oracle equivalence", limit=5.0)
def check_dense_oracle(params_1d: WalkParams | None = None, params_2d: WalkParams | None = None):
    rng = np.random.default_rng(12345)
    errors = []
    for lat, params in ((LatticeSpec.one_d(5), params_1d or WalkParams.preset_1d(0.7)),
                        (LatticeSpec.two_d(3), params_2d or WalkParams.preset_2d(0.7))):
        # the oracle is assembled from the individual factor matrices
        oracle = sparse_step_matrix(params, lat).toarray()
        stepper = make_stepper(params, lat)
        err = 0.0
        for _ in range(50):
            v = rng.standard_normal(lat.size) + 1j * rng.standard_normal(lat.size)
            got = stepper(WaveFunction.from_vector(v, lat)).vector
            err = max(err, float(np.max(np.abs(got - oracle @ v))))
        errors.append(err)
    return max(errors) <= 1e-12, f"max error = {errors[0]:.2e} (1D), {errors[1]:.2e} (2D) (<= 1e-12)"


def _norm_drift(records) -> float:
    return max(abs(r.total_probability - 1.0) for r in records)


@_timed(6, "unitary conservation", limit=60.0)
def check_conservation(include_2d: bool = True):
    cfg = preset_config("fig7")
    records, _ = evolve_and_record(prepare_initial_1d(_eigenpair_1d(801), cfg.delta_x),
                                   cfg.params.with_g(0.0), cfg.steps)
    d1 = _norm_drift(records)
    ok = d1 <= 1e-10
    detail = f"1D drift = {d1:.2e} (<= 1e-10)"
    if include_2d:
        cfg2 = preset_config("fig10")
        start = prepare_initial_2d(_eigenpair_2d(71), cfg2.delta, cfg2.k)
        records, _ = evolve_and_record(start, cfg2.params.with_g(0.0), cfg2.steps)
        d2 = _norm_drift(records)
        ok = ok and d2 <= 1e-9
        detail += f", 2D drift = {d2:.2e} (<= 1e-9)"
    else:
        detail += ", 2D skipped at this level"
    return ok, detail


@_timed(7, "activity ordering")
def check_activity(include_2d: bool = True):
    cfg = preset_config("fig7")
    start = prepare_initial_1d(_eigenpair_1d(801), cfg.delta_x)
    sd = {g: evolve_and_record(start, cfg.params.with_g(g), 400)[0][-1].std_dev[0] for g in (0.0, 1.0)}
    ok = sd[1.0] > sd[0.0]
    detail = f"1D dx(400): g=1 {sd[1.0]:.4f} vs g=0 {sd[0.0]:.4f}"
    if include_2d:
        cfg2 = preset_config("fig10")
        start = prepare_initial_2d(_eigenpair_2d(71), cfg2.delta, cfg2.k)
        avg = {}
        for g in (0.0, 1.0):
            records, _ = evolve_and_record(start, cfg2.params.with_g(g), 100)
            avg[g] = np.mean([r.std_dev for r in records[70:101]], axis=0)
        ok = ok and bool(np.all(avg[1.0] > avg[0.0]))
        detail += (f"; 2D mean (dx, dy) over T=70..100: g=1 ({avg[1.0][0]:.4f}, {avg[1.0][1]:.4f}) "
                   f"vs g=0 ({avg[0.0][0]:.4f}, {avg[0.0][1]:.4f})")
    else:
        detail += "; 2D skipped at this level"
    return ok, detail


@_timed(8, "survival trend")
def check_survival():
    cfg = preset_config("fig5")
    start = prepare_initial_1d(_eigenpair_1d(401), 19)
    surv = {}
    for g in (0.0, 1.0, 8.0, 10.0):
        records, _ = evolve_and_record(start, cfg.params.with_g(g), cfg.steps,
                                       survival_region=cfg.survival_region)
        surv[g] = records[-1].survival
    plateau = abs(surv[10.0] - surv[8.0]) / surv[10.0]
    ok = surv[1.0] < surv[0.0] and plateau < 0.1
    return ok, (f"survival g=0 {surv[0.0]:.6f}, g=1 {surv[1.0]:.6f}; "
                f"|s(10)-s(8)|/s(10) = {plateau:.2e} (< 0.1)")


@_timed(9, "pump rate model", limit=1.0)
def check_pump():
    worst_ratio = worst_traj = 0.0
    for g in (0.0, 0.5, 1.0):
        model = RateModel(w=0.25, g=g, n1=1.0, n2=0.0)
        w21, w12 = model.rates
        rate = w21 + w12
        traj = integrate_rate_equations(model, t_max=40.0 / rate, dt=0.02 / rate)
        exact = closed_form(model, traj.t)
        worst_traj = max(worst_traj, float(np.max(np.abs(traj.n1 - exact.n1))),
                         float(np.max(np.abs(traj.n2 - exact.n2))))
        worst_ratio = max(worst_ratio, abs(traj.ratio[-1] / stationary_ratio(g) - 1.0))
    ok = worst_ratio <= 1e-6 and worst_traj <= 1e-8
    return ok, f"ratio rel. error = {worst_ratio:.2e} (<= 1e-6), RK4 vs closed form = {worst_traj:.2e} (<= 1e-8)"


@_timed(10, "bi-orthogonal suite", limit=1.0)
def check_biortho():
    ham = TwoLevelHamiltonian(0.25, 0.25, 1.0)
    system = right_left_eigensystem(ham)
    gram = float(np.max(np.abs(system.biorthogonal_gram() - np.eye(2))))
    rr_off = float(abs(system.right_gram()[0, 1]))
    series = expectation_time_series(ham, [1 / math.sqrt(2), 1 / math.sqrt(2)], 100)
    lr = series.energy_left_right
    lr_drift = float(np.max(np.abs(lr - lr[0])))
    # for this block the real part is constant; the oscillation is in the imaginary part
    rr = series.energy_right_right
    rr_ptp = float(np.max(np.abs(rr - rr[0])))
    ok = gram <= 1e-12 and rr_off > 1e-3 and lr_drift <= 1e-12 and rr_ptp > 1e-3
    return ok, (f"|<L|R> - I| = {gram:.1e} (<= 1e-12), |<R1|R2>| = {rr_off:.3f} (> 1e-3), "
                f"LR energy drift = {lr_drift:.1e} (<= 1e-12), RR energy swing = {rr_ptp:.3f} (> 1e-3)")


def _csvs(root: Path) -> list[str]:
    return sorted(p.name for p in root.glob("*.csv"))


@_timed(11, "deterministic reruns")
def check_determinism(presets=("fig3", "fig4", "fig7"), overrides=None):
    overrides = overrides or {}
    report = []
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        for name in presets:
            cfg = preset_config(name, **overrides.get(name, {}))
            a, b = Path(tmp, name, "a"), Path(tmp, name, "b")
            run_experiment(cfg, a)
            run_experiment(cfg, b)
            files = _csvs(a)
            same = files == _csvs(b) and all(filecmp.cmp(a / f, b / f, shallow=False) for f in files)
            ok = ok and same and bool(files)
            report.append(f"{name}: {len(files)} csv {'identical' if same else 'DIFFER'}")
    return ok, ", ".join(report)


QUICK_FAST_OVERRIDES = {"fig7": {"steps": 40}}


def suite(level: str = "quick") -> list[Callable[[], CheckResult]]:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    full = level == "full"
    checks = [check_unit_circle]
    if full:
        checks += [check_eigen_1d, check_eigen_2d]
    checks += [check_gauge, check_dense_oracle,
               lambda: check_conservation(include_2d=full),
               lambda: check_activity(include_2d=full),
               check_survival, check_pump, check_biortho]
    if full:
        checks.append(lambda: check_determinism(("fig3", "fig7", "fig5", "fig10")))
    else:
        checks.append(lambda: check_determinism(("fig3", "fig4", "fig7"), QUICK_FAST_OVERRIDES))
    return checks


def run_suite(level: str = "quick", echo: Callable[[str], None] = print) -> list[CheckResult]:
    results = []
    for check in suite(level):
        res = check()
        echo(res.line())
        results.append(res)
    passed = sum(r.passed for r in results)
    echo(f"{passed}/{len(results)} checks passed")
    return results
