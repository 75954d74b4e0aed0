"""CSV and JSON writers.

Floats use ``format(x, ".17g")``, which ignores the locale and round-trips
exactly, so identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .lattice import LatticeSpec
from .observables import DensitySnapshot, ObservableRecord


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def record_columns(dimension: int, with_survival: bool) -> list[str]:
    axes = "xy"[:dimension]
    cols = ["T", "total_probability"]
    for a in axes:
        cols += [f"mean_{a}", f"sd_{a}"]
    if with_survival:
        cols += ["survival", "survival_raw"]
    cols += ["P_G", "P_E"]
    for sector in "GE":
        for a in axes:
            cols += [f"mean_{a}_{sector}", f"sd_{a}_{sector}"]
    return cols


def record_row(rec: ObservableRecord, with_survival: bool) -> list:
    row: list = [rec.step, rec.total_probability]
    for m, s in zip(rec.mean, rec.std_dev):
        row += [m, s]
    if with_survival:
        row += [rec.survival, rec.survival_raw]
    row += [rec.ground_probability, rec.excited_probability]
    for means, stds in ((rec.ground_mean, rec.ground_std), (rec.excited_mean, rec.excited_std)):
        for m, s in zip(means, stds):
            row += [m, s]
    return row


def write_records(path: Path, records: Sequence[ObservableRecord], dimension: int) -> Path:
    with_survival = bool(records) and records[0].survival is not None
    return write_csv(path, record_columns(dimension, with_survival),
                     (record_row(r, with_survival) for r in records))


def write_density(path: Path, snap: DensitySnapshot, lattice: LatticeSpec) -> Path:
    """1D: columns x, P_G, P_E, P. 2D: first column x, remaining columns one per y."""
    if lattice.dimension == 1:
        x = lattice.coords(0)
        rows = zip(x, snap.ground, snap.excited, snap.total)
        return write_csv(path, ["x", "P_G", "P_E", "P"], rows)
    x, y = lattice.coords(0), lattice.coords(1)
    header = ["x\\y"] + [str(int(v)) for v in y]
    rows = ([int(xi)] + list(snap.total[i]) for i, xi in enumerate(x))
    return write_csv(path, header, rows)


def read_density_2d(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`write_density` for 2D files: (x, y, P[x, y])."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    y = np.array([int(v) for v in rows[0][1:]])
    x = np.array([int(r[0]) for r in rows[1:]])
    p = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return x, y, p


def write_spectrum(path: Path, values: np.ndarray) -> Path:
    return write_csv(path, ["re", "im", "abs"], ((v.real, v.imag, abs(v)) for v in values))
