"""Experiment configuration: flat dotted-key JSON, presets and validation."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .lattice import LatticeSpec
from .walk1d import G_CAP, WalkParams

EXPERIMENTS = ("evolution", "spectrum", "survival_sweep")

TARGET_1D = complex(0.9378050525983931, 0.3471623299278579)
TARGET_2D = complex(0.9336010518344118, 0.3583142140826795)


class ConfigError(ValueError):
    """Invalid configuration; ``key`` is the offending dotted field name."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


_FRACTION = re.compile(r"^\s*(-?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(value: Any, key: str = "params.theta0") -> float:
    """A number in radians, or a string like ``"pi/8"``, ``"3pi/4"``, ``"-pi"``."""
    if isinstance(value, bool):
        raise ConfigError("expected a number or a 'pi/n' string", key)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _FRACTION.match(value)
        if m:
            num = m.group(1)
            coeff = -1.0 if num == "-" else float(num) if num else 1.0
            denom = float(m.group(2)) if m.group(2) else 1.0
            if denom == 0:
                raise ConfigError("zero denominator", key)
            return coeff * math.pi / denom
        try:
            return float(value)
        except ValueError:
            pass
    raise ConfigError(f"cannot parse angle {value!r}", key)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "evolution"
    preset: str | None = None
    dimension: int = 1
    theta0: float = math.pi / 8
    epsilon: float = 0.25
    w: float = 0.25
    alpha: float = 1.0
    beta: float = 0.025
    g: float = 0.0
    extent_x: int = 401
    extent_y: int | None = None
    target_re: float = TARGET_1D.real
    target_im: float = TARGET_1D.imag
    delta_x: int = 19
    delta_y: int = 0
    k_x: float = 0.0
    k_y: float = 0.0
    steps: int = 400
    snapshot_every: int = 0
    snapshot_steps: tuple[int, ...] = ()
    survival_lo: int | None = -80
    survival_hi: int | None = 0
    output_dir: str = "out"
    solver_tol: float = 1e-10
    solver_ncv: int = 60
    solver_max_restarts: int = 200
    solver_seed: int = 0
    solver_max_distance: float = 0.1
    spectrum_g: tuple[float, ...] = (0.0, 1.0)
    sweep_g: tuple[float, ...] = ()
    sweep_delta_x: tuple[int, ...] = ()

    @property
    def params(self) -> WalkParams:
        return WalkParams(self.theta0, self.epsilon, self.w, self.alpha, self.beta, self.g)

    @property
    def lattice(self) -> LatticeSpec:
        if self.dimension == 1:
            return LatticeSpec.one_d(self.extent_x)
        return LatticeSpec.two_d(self.extent_x, self.extent_y or self.extent_x)

    @property
    def target(self) -> complex:
        return complex(self.target_re, self.target_im)

    @property
    def survival_region(self) -> tuple[int, int] | None:
        if self.survival_lo is None or self.survival_hi is None:
            return None
        return (self.survival_lo, self.survival_hi)

    @property
    def delta(self) -> tuple[int, ...]:
        return (self.delta_x,) if self.dimension == 1 else (self.delta_x, self.delta_y)

    @property
    def k(self) -> tuple[float, float]:
        return (self.k_x, self.k_y)

    def snapshot_schedule(self) -> list[int]:
        wanted = set(self.snapshot_steps)
        if self.snapshot_every > 0:
            wanted.update(range(0, self.steps + 1, self.snapshot_every))
        return sorted(t for t in wanted if 0 <= t <= self.steps)

    def to_dict(self) -> dict[str, Any]:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[_KEYS[f.name]] = list(value) if isinstance(value, tuple) else value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def replace(self, **changes) -> "ExperimentConfig":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return _validated(data)


# dotted key used in JSON for each dataclass field
_KEYS = {
    "experiment": "experiment",
    "preset": "preset",
    "dimension": "dimension",
    "theta0": "params.theta0",
    "epsilon": "params.epsilon",
    "w": "params.w",
    "alpha": "params.alpha",
    "beta": "params.beta",
    "g": "params.g",
    "extent_x": "lattice.extent_x",
    "extent_y": "lattice.extent_y",
    "target_re": "initial.target_re",
    "target_im": "initial.target_im",
    "delta_x": "initial.delta_x",
    "delta_y": "initial.delta_y",
    "k_x": "initial.k_x",
    "k_y": "initial.k_y",
    "steps": "steps",
    "snapshot_every": "snapshots.every",
    "snapshot_steps": "snapshots.steps",
    "survival_lo": "survival.x_lo",
    "survival_hi": "survival.x_hi",
    "output_dir": "output.dir",
    "solver_tol": "solver.tol",
    "solver_ncv": "solver.ncv",
    "solver_max_restarts": "solver.max_restarts",
    "solver_seed": "solver.seed",
    "solver_max_distance": "solver.max_distance",
    "spectrum_g": "spectrum.g",
    "sweep_g": "sweep.g",
    "sweep_delta_x": "sweep.delta_x",
}
_FIELDS = {v: k for k, v in _KEYS.items()}
KNOWN_KEYS = tuple(sorted(_FIELDS))

_INTS = {"dimension", "extent_x", "extent_y", "delta_x", "delta_y", "steps", "snapshot_every",
         "survival_lo", "survival_hi", "solver_ncv", "solver_max_restarts", "solver_seed"}
_OPTIONAL = {"preset", "extent_y", "survival_lo", "survival_hi"}
_FLOAT_LISTS = {"spectrum_g", "sweep_g"}
_INT_LISTS = {"snapshot_steps", "sweep_delta_x"}


def _as_int(value, key):
    if isinstance(value, bool):
        raise ConfigError("expected an integer", key)
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ConfigError(f"expected an integer, got {value!r}", key)


def _as_float(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError("must be finite", key)
    return value


def _coerce(name: str, value):
    key = _KEYS[name]
    if value is None:
        if name in _OPTIONAL:
            return None
        raise ConfigError("may not be null", key)
    if name == "theta0":
        return parse_angle(value, key)
    if name in _INTS:
        return _as_int(value, key)
    if name in _FLOAT_LISTS or name in _INT_LISTS:
        if not isinstance(value, (list, tuple)):
            raise ConfigError("expected a list", key)
        conv = _as_float if name in _FLOAT_LISTS else _as_int
        return tuple(conv(v, key) for v in value)
    if name in ("experiment", "preset", "output_dir"):
        if not isinstance(value, str):
            raise ConfigError("expected a string", key)
        return value
    return _as_float(value, key)


def _validated(data: dict[str, Any]) -> ExperimentConfig:
    cfg = ExperimentConfig(**{name: _coerce(name, value) for name, value in data.items()})
    _check(cfg)
    return cfg


def _check(cfg: ExperimentConfig) -> None:
    def fail(name, message):
        raise ConfigError(message, _KEYS[name])

    if cfg.experiment not in EXPERIMENTS:
        fail("experiment", f"must be one of {', '.join(EXPERIMENTS)}")
    if cfg.dimension not in (1, 2):
        fail("dimension", "must be 1 or 2")
    for name in ("extent_x", "extent_y"):
        n = getattr(cfg, name)
        if n is None:
            continue
        if n < 3 or n % 2 == 0:
            fail(name, f"must be an odd integer >= 3, got {n}")
    if cfg.dimension == 1 and cfg.extent_y is not None:
        fail("extent_y", "must be null in one dimension")
    if cfg.beta == 0:
        fail("beta", "must be nonzero")
    for name, values in (("g", (cfg.g,)), ("spectrum_g", cfg.spectrum_g), ("sweep_g", cfg.sweep_g)):
        if any(abs(g) > G_CAP for g in values):
            fail(name, f"|g| must not exceed {G_CAP}")
    if abs(abs(cfg.target) - 1.0) > 1e-6:
        fail("target_re", f"target must lie on the unit circle, |target| = {abs(cfg.target)}")
    if cfg.steps < 0:
        fail("steps", "must be >= 0")
    if cfg.snapshot_every < 0:
        fail("snapshot_every", "must be >= 0")
    if (cfg.survival_lo is None) != (cfg.survival_hi is None):
        fail("survival_lo", "x_lo and x_hi must both be set or both be null")
    if cfg.experiment != "spectrum":
        _check_initial_and_region(cfg, fail)
    if not cfg.solver_tol > 0:
        fail("solver_tol", "must be positive")
    if cfg.solver_ncv < 3:
        fail("solver_ncv", "must be >= 3")
    if cfg.solver_max_restarts < 0:
        fail("solver_max_restarts", "must be >= 0")
    if cfg.experiment == "survival_sweep":
        if not cfg.sweep_g or not cfg.sweep_delta_x:
            fail("sweep_g", "a survival sweep needs sweep.g and sweep.delta_x")
        if cfg.survival_region is None or cfg.dimension != 1:
            fail("survival_lo", "a survival sweep needs a 1D lattice and a survival region")


def _check_initial_and_region(cfg: ExperimentConfig, fail) -> None:
    # only meaningful when a state is evolved; spectrum runs ignore these keys
    lattice = cfg.lattice
    for name, d, axis in (("delta_x", cfg.delta_x, 0), ("delta_y", cfg.delta_y, 1)):
        if axis < lattice.dimension and abs(d) >= lattice.shape[axis]:
            fail(name, "shift must be smaller than the lattice extent")
    for d in cfg.sweep_delta_x:
        if abs(d) >= lattice.shape[0]:
            fail("sweep_delta_x", "shift must be smaller than the lattice extent")
    if cfg.survival_region is not None:
        lo, hi = cfg.survival_region
        half = lattice.shape[0] // 2
        if lo > hi:
            fail("survival_lo", "empty survival region")
        if lo < -half or hi > half:
            fail("survival_lo", f"region [{lo}, {hi}] lies outside the lattice [-{half}, {half}]")


_BASE_1D = {
    "params.theta0": "pi/8", "params.epsilon": 0.25, "params.w": 0.25,
    "params.alpha": 1.0, "params.beta": 0.025,
}

PRESETS: dict[str, dict[str, Any]] = {
    "fig3": {**_BASE_1D, "experiment": "spectrum", "lattice.extent_x": 21, "spectrum.g": [0.0, 1.0],
             "survival.x_lo": None, "survival.x_hi": None},
    "fig5": {
        **_BASE_1D, "experiment": "survival_sweep", "lattice.extent_x": 401, "steps": 400,
        "sweep.delta_x": [9, 14, 19, 24, 29],
        "sweep.g": [0.5 * i for i in range(21)],
    },
    "fig6": {**_BASE_1D, "lattice.extent_x": 801, "steps": 400, "params.g": 1.0},
    "fig7": {**_BASE_1D, "lattice.extent_x": 801, "steps": 400, "snapshots.every": 1},
    "fig10": {
        **_BASE_1D, "dimension": 2, "params.alpha": 0.5, "params.beta": 0.05,
        "lattice.extent_x": 71, "lattice.extent_y": 71,
        "initial.target_re": TARGET_2D.real, "initial.target_im": TARGET_2D.imag,
        "initial.delta_x": 9, "initial.delta_y": 0, "initial.k_x": 0.0, "initial.k_y": math.pi,
        "steps": 100, "snapshots.every": 5, "survival.x_lo": None, "survival.x_hi": None,
        "solver.tol": 1e-9, "solver.max_distance": 1.0,
    },
}
PRESETS["fig4"] = {**PRESETS["fig7"], "steps": 0, "snapshots.every": 0, "snapshots.steps": [0]}
PRESETS["fig9"] = {**PRESETS["fig10"], "steps": 0, "snapshots.every": 0, "snapshots.steps": [0]}
PRESETS["fig11"] = {**PRESETS["fig10"], "steps": 40, "snapshots.every": 0, "snapshots.steps": [40]}


def config_from_mapping(mapping: dict[str, Any]) -> ExperimentConfig:
    """Resolve preset, then apply the explicit keys on top of it."""
    if not isinstance(mapping, dict):
        raise ConfigError("configuration must be a JSON object")
    if set(mapping) >= {"config", "version"} and isinstance(mapping["config"], dict):
        mapping = mapping["config"]  # a run manifest
    unknown = sorted(set(mapping) - set(_FIELDS))
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(unknown)}", unknown[0])
    merged: dict[str, Any] = {}
    preset = mapping.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; known: {', '.join(sorted(PRESETS))}", "preset")
        merged.update(PRESETS[preset])
    merged.update(mapping)
    return _validated({_FIELDS[k]: v for k, v in merged.items()})


def load_config(source: str | Path | dict) -> ExperimentConfig:
    """Parse a config from a dict, a path to a JSON file, or JSON text."""
    if isinstance(source, dict):
        return config_from_mapping(source)
    text = None
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    else:
        text = source
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return config_from_mapping(data)


def preset_config(name: str, **overrides: Any) -> ExperimentConfig:
    """Preset by name with optional overrides given by dotted key."""
    return config_from_mapping({"preset": name, **overrides})
