"""Single runs and deterministic parameter sweeps.

Sweep points are independent tasks; they may be evaluated concurrently, but
results are buffered and written strictly in input order, so worker count
never changes a byte of output.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import __version__
from ..dynamics import Trajectory, evolve_lindblad, evolve_unitary
from ..errors import ConfigError
from ..metrics import SqueezingSeries, band_statistics, duty_cycle, trajectory_metrics
from ..states import css
from .config import RunConfig
from .io import write_csv, write_json, write_series_csv


def pmap(fn, items, workers: int = 1) -> list:
    """Order-preserving map, optionally over a process pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=1))


def compute_trajectory(config: RunConfig) -> Trajectory:
    config.validate()
    spec = config.evolution_spec()
    initial = css(config.spin(), config.css_direction())
    if spec.dephasing_rate == 0.0:
        return evolve_unitary(initial, spec)
    return evolve_lindblad(initial, spec)


def compute_series(config: RunConfig) -> SqueezingSeries:
    return trajectory_metrics(compute_trajectory(config), config.spin())


@dataclass(frozen=True)
class RunResult:
    config: RunConfig
    series: SqueezingSeries
    csv_path: Path
    sidecar_path: Path
    figure_path: Path | None


def run_single(config: RunConfig, out_dir=None, basename: str = "run",
               figures: bool = True) -> RunResult:
    """Evolve one configuration and write its CSV, sidecar, and figure."""
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    series = compute_series(config)
    csv_path = out / f"{basename}.csv"
    write_series_csv(csv_path, series, config.f_q_hz)
    sidecar_path = out / f"{basename}.json"
    write_json(sidecar_path, {"config": config.to_dict(),
                              "library_version": __version__})
    figure_path = None
    if figures:
        from . import figures as figmod
        figure_path = out / f"{basename}.png"
        figmod.save_run_figure(figure_path, series, config)
    return RunResult(config, series, csv_path, sidecar_path, figure_path)


#: sweep axis name -> RunConfig field
SWEEP_AXES = {
    "eta": "eta",
    "theta_css": "css_theta",
    "phi_css": "css_phi",
    "larmor": "larmor_hz",
    "spin": "spin_two_i",
}


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"must be one of {sorted(SWEEP_AXES)}, got {self.axis!r}",
                              field="axis")
        if not self.values:
            raise ConfigError("needs at least one value", field="values")
        if len(set(self.values)) != len(self.values):
            raise ConfigError("values must be unique", field="values")


def parse_sweep_values(text: str, axis: str) -> tuple:
    """Either an explicit comma list or an ``a:b:n`` linspace triple."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:count, got {text!r}",
                              field="values")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad range {text!r} ({exc})", field="values")
        if n < 1:
            raise ConfigError("count must be >= 1", field="values")
        raw = np.linspace(a, b, n).tolist()
    else:
        try:
            raw = [float(v) for v in text.split(",") if v.strip() != ""]
        except ValueError as exc:
            raise ConfigError(f"bad value list {text!r} ({exc})", field="values")
    if axis == "spin":
        vals = []
        for v in raw:
            if v != int(v):
                raise ConfigError(f"spin axis values must be integers (2I), got {v}",
                                  field="values")
            vals.append(int(v))
        return tuple(vals)
    return tuple(raw)


def _point_config(base: RunConfig, axis: str, value) -> RunConfig:
    return dataclasses.replace(base, **{SWEEP_AXES[axis]: value}).validate()


def _sweep_task(args):
    base, axis, value = args
    config = _point_config(base, axis, value)
    series = compute_series(config)
    return config, series


@dataclass(frozen=True)
class SweepResult:
    out_dir: Path
    aggregate_path: Path
    manifest_path: Path
    failures: list


def run_sweep(base: RunConfig, sweep: SweepSpec, out_dir=None, workers: int = 1,
              figures: bool = True) -> SweepResult:
    """Evaluate every sweep point, write per-point files and an aggregate CSV.

    Failed points are recorded in the manifest and skipped in the aggregate;
    the caller decides what a partial failure means (the CLI exits 4).
    """
    out = Path(out_dir if out_dir is not None else base.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    tasks = [(base, sweep.axis, v) for v in sweep.values]
    outcomes = pmap(_sweep_task_safe, tasks, workers)

    axis_vals, mins, maxs, means, duties, finals, flaggeds = [], [], [], [], [], [], []
    failures = []
    point_files = []
    for k, (value, outcome) in enumerate(zip(sweep.values, outcomes)):
        name = f"point_{k:03d}"
        if isinstance(outcome, str):
            failures.append({"index": k, "value": value, "error": outcome})
            continue
        config, series = outcome
        write_series_csv(out / f"{name}.csv", series, config.f_q_hz)
        write_json(out / f"{name}.json", {"config": config.to_dict(),
                                          "library_version": __version__})
        point_files.append(f"{name}.csv")
        band = band_statistics(series)
        duty = duty_cycle(series)
        axis_vals.append(value)
        mins.append(band.xi_min)
        maxs.append(band.xi_max)
        means.append(band.xi_mean)
        duties.append(duty.fraction)
        finals.append(series.xi_s[-1])
        flaggeds.append(band.n_flagged)

    aggregate = out / "aggregate.csv"
    write_csv(aggregate,
              [sweep.axis, "xi_s_min", "xi_s_max", "xi_s_mean",
               "duty_cycle", "final_xi_s", "n_flagged"],
              [np.asarray(axis_vals), np.asarray(mins), np.asarray(maxs),
               np.asarray(means), np.asarray(duties), np.asarray(finals),
               np.asarray(flaggeds, dtype=int)])

    manifest = out / "manifest.json"
    write_json(manifest, {
        "axis": sweep.axis,
        "values": list(sweep.values),
        "points": point_files,
        "aggregate": aggregate.name,
        "failures": failures,
        "library_version": __version__,
    })

    if figures and axis_vals:
        from . import figures as figmod
        figmod.save_sweep_figure(out / "aggregate.png", sweep.axis,
                                 axis_vals, mins, means, maxs, duties)
    return SweepResult(out, aggregate, manifest, failures)


def _sweep_task_safe(args):
    try:
        return _sweep_task(args)
    except Exception as exc:  # reported in the manifest, not raised
        return f"{type(exc).__name__}: {exc}"
