"""Run a configured experiment and write its artifacts."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import get_backend
from .config import ExperimentConfig
from .gauge import EigenPair, dense_evolution_matrix, dense_spectrum, find_eigenpair
from .observables import evolve_and_record, prepare_initial_1d, prepare_initial_2d
from .outputs import write_csv, write_density, write_json, write_records, write_spectrum

log = logging.getLogger(__name__)

MAX_SNAPSHOTS_2D = 200


@dataclass
class RunResult:
    out_dir: Path
    files: list[Path] = field(default_factory=list)
    eigenpair: EigenPair | None = None
    records: list = field(default_factory=list)
    wall_time: float = 0.0


def thin_schedule(steps: list[int], cap: int) -> list[int]:
    """Keep at most ``cap`` entries, spread uniformly and always keeping both ends."""
    if len(steps) <= cap:
        return list(steps)
    picks = np.unique(np.round(np.linspace(0, len(steps) - 1, cap)).astype(int))
    return [steps[i] for i in picks]


def initial_eigenpair(cfg: ExperimentConfig) -> EigenPair:
    # the initial state is always built from the g = 0 eigenstate
    return find_eigenpair(cfg.params.with_g(0.0), cfg.lattice, cfg.target, tol=cfg.solver_tol,
                          ncv=cfg.solver_ncv, max_restarts=cfg.solver_max_restarts,
                          seed=cfg.solver_seed, max_distance=cfg.solver_max_distance)


def initial_state(cfg: ExperimentConfig, pair: EigenPair, delta_x: int | None = None):
    if cfg.dimension == 1:
        return prepare_initial_1d(pair, cfg.delta_x if delta_x is None else delta_x)
    return prepare_initial_2d(pair, cfg.delta, cfg.k)


def eigenpair_payload(pair: EigenPair) -> dict:
    return {
        "eigenvalue": {"re": pair.eigenvalue.real, "im": pair.eigenvalue.imag},
        "residual": pair.residual,
        "target": {"re": pair.target.real, "im": pair.target.imag},
        "distance_to_target": abs(pair.eigenvalue - pair.target),
        "iterations": {"restarts": pair.restarts, "matvecs": pair.matvecs},
        "g": pair.g,
    }


def _label(g: float) -> str:
    return format(g, "g").replace("-", "m")


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> RunResult:
    start = time.perf_counter()
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = RunResult(out)

    if cfg.experiment == "spectrum":
        for g in cfg.spectrum_g:
            values = dense_spectrum(dense_evolution_matrix(cfg.params.with_g(g), cfg.lattice))
            result.files.append(write_spectrum(out / f"spectrum_g{_label(g)}.csv", values))
    else:
        pair = initial_eigenpair(cfg)
        result.eigenpair = pair
        result.files.append(write_json(out / "eigenpair.json", eigenpair_payload(pair)))
        if cfg.experiment == "survival_sweep":
            result.files.append(_survival_sweep(cfg, pair, out))
        else:
            _evolution(cfg, pair, out, result)

    result.wall_time = time.perf_counter() - start
    manifest = {
        "config": cfg.to_dict(),
        "version": __version__,
        "backend": get_backend(),
        "wall_time_s": result.wall_time,
        "outputs": sorted(p.name for p in result.files),
    }
    result.files.append(write_json(out / "manifest.json", manifest))
    return result


def _evolution(cfg: ExperimentConfig, pair: EigenPair, out: Path, result: RunResult) -> None:
    schedule = cfg.snapshot_schedule()
    if cfg.dimension == 2 and len(schedule) > MAX_SNAPSHOTS_2D:
        log.warning("%d snapshots requested; thinning to %d", len(schedule), MAX_SNAPSHOTS_2D)
        schedule = thin_schedule(schedule, MAX_SNAPSHOTS_2D)
    region = cfg.survival_region if cfg.dimension == 1 else None
    records, snapshots = evolve_and_record(initial_state(cfg, pair), cfg.params, cfg.steps,
                                           snapshot_steps=schedule, survival_region=region)
    result.records = records
    totals = [r.total_probability for r in records]
    log.info("total probability range over the run: [%.6g, %.6g]", min(totals), max(totals))
    result.files.append(write_records(out / "records.csv", records, cfg.dimension))
    width = len(str(cfg.steps))
    for snap in snapshots:
        path = out / f"density_{snap.step:0{width}d}.csv"
        result.files.append(write_density(path, snap, cfg.lattice))


def survival_sweep(cfg: ExperimentConfig, pair: EigenPair) -> list[tuple[int, float, float, float]]:
    """(delta_x, g, survival, survival_raw) at T = cfg.steps for every grid point."""
    rows = []
    for dx in cfg.sweep_delta_x:
        start = initial_state(cfg, pair, dx)
        for g in cfg.sweep_g:
            params = cfg.params.with_g(g)
            records, _ = evolve_and_record(start, params, cfg.steps,
                                           survival_region=cfg.survival_region)
            rows.append((dx, g, records[-1].survival, records[-1].survival_raw))
    return rows


def _survival_sweep(cfg: ExperimentConfig, pair: EigenPair, out: Path) -> Path:
    rows = survival_sweep(cfg, pair)
    return write_csv(out / "survival_sweep.csv", ["delta_x", "g", "survival", "survival_raw"], rows)
