"""Two-level rate equations for laser pumping with spontaneous decay."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk1d import check_g


def golden_rule_rates(w: float, g: float) -> tuple[float, float]:
    """(w21, w12): pumping G->E is w^2 e^{2g}, decay E->G is w^2 e^{-2g}."""
    g = check_g(g)
    return w * w * math.exp(2 * g), w * w * math.exp(-2 * g)


def stationary_ratio(g: float) -> float:
    """N2/N1 at the fixed point of the rate equations."""
    return math.exp(4 * g)


@dataclass(frozen=True)
class RateModel:
    w: float
    g: float
    n1: float = 0.5
    n2: float = 0.5

    def __post_init__(self):
        check_g(self.g)
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("occupations must be non-negative")
        if not self.n1 + self.n2 > 0:
            raise ValueError("total occupation must be positive")

    @property
    def total(self) -> float:
        return self.n1 + self.n2

    @property
    def rates(self) -> tuple[float, float]:
        return golden_rule_rates(self.w, self.g)

    def derivative(self, n1: float, n2: float) -> tuple[float, float]:
        w21, w12 = self.rates
        d1 = w12 * n2 - w21 * n1
        return d1, -d1


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    n1: np.ndarray
    n2: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        return self.n2 / self.n1


def integrate_rate_equations(model: RateModel, t_max: float, dt: float) -> Trajectory:
    """Fixed-step RK4 on a uniform grid with spacing at most ``dt``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    w21, w12 = model.rates
    rate = w21 + w12
    if rate > 0 and dt >= 2.0 / rate:
        raise ValueError(f"dt={dt} is not below the stability bound 2/(w12+w21)={2.0 / rate}")
    n_steps = int(math.ceil(t_max / dt - 1e-12)) if t_max > 0 else 0
    h = t_max / n_steps if n_steps else 0.0
    t = np.linspace(0.0, t_max, n_steps + 1)
    n1 = np.empty(n_steps + 1)
    n2 = np.empty(n_steps + 1)
    n1[0], n2[0] = model.n1, model.n2
    f = model.derivative
    for i in range(n_steps):
        a1, a2 = n1[i], n2[i]
        k1 = f(a1, a2)
        k2 = f(a1 + 0.5 * h * k1[0], a2 + 0.5 * h * k1[1])
        k3 = f(a1 + 0.5 * h * k2[0], a2 + 0.5 * h * k2[1])
        k4 = f(a1 + h * k3[0], a2 + h * k3[1])
        n1[i + 1] = a1 + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        n2[i + 1] = a2 + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return Trajectory(t, n1, n2)


def closed_form(model: RateModel, t) -> Trajectory:
    """Exact solution: relaxation to the fixed point at rate w12 + w21."""
    t = np.asarray(t, dtype=float)
    w21, w12 = model.rates
    rate = w21 + w12
    n = model.total
    n1_st = n * w12 / rate
    n1 = n1_st + (model.n1 - n1_st) * np.exp(-rate * t)
    return Trajectory(t, n1, n - n1)
