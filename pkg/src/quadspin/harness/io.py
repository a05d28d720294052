"""Deterministic file emission: CSV (LF, '.' decimal, 17 significant digits)
and JSON sidecars.  No timestamps, no locale, no iteration-order surprises —
identical inputs must produce identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def fmt(value) -> str:
    """One float as text: 17 significant digits, round-trip exact."""
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def write_csv(path, header: list[str], columns: list):
    """Columns of equal length to a comma-separated file with LF endings."""
    cols = [np.asarray(c) for c in columns]
    n = cols[0].shape[0]
    lines = [",".join(header)]
    for k in range(n):
        cells = []
        for c in cols:
            x = c[k]
            if isinstance(x, (bool, np.bool_)):
                cells.append(str(int(x)))
            elif isinstance(x, (int, np.integer)):
                cells.append(str(int(x)))
            else:
                cells.append(fmt(x))
        lines.append(",".join(cells))
    write_text(path, "\n".join(lines) + "\n")


def write_json(path, obj):
    write_text(path, json.dumps(obj, indent=2) + "\n")


SERIES_HEADER = ["t_over_fq", "xi_s", "xi_r", "sx", "sy", "sz",
                 "var_min", "var_max", "opt_angle", "purity", "flag"]


def write_series_csv(path, series, f_q_hz: float):
    """One squeezing record per row, on the dimensionless tau = f_Q t axis."""
    write_csv(path, SERIES_HEADER, [
        series.t * f_q_hz, series.xi_s, series.xi_r,
        series.sx, series.sy, series.sz,
        series.var_min, series.var_max, series.optimal_angle,
        series.purity, series.flagged.astype(int),
    ])


def write_wigner_csv(path, field, spin, extra_meta: dict | None = None):
    """Sphere-distribution CSV (theta,phi,w rows, theta-major) plus a JSON sidecar."""
    n_theta, n_phi = field.grid.shape
    th = np.repeat(field.grid.thetas, n_phi)
    ph = np.tile(field.grid.phis, n_theta)
    write_csv(path, ["theta", "phi", "w"], [th, ph, field.values.reshape(-1)])
    meta = {
        "two_i": spin.two_i,
        "normalization": "unit integral over the sphere; values in 1/sr",
        "n_theta": n_theta,
        "n_phi": n_phi,
        "row_order": "theta-major",
    }
    if extra_meta:
        meta.update(extra_meta)
    write_json(Path(path).with_suffix(".json"), meta)
