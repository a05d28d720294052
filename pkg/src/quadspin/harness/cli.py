"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 integrator failure,
4 partial sweep failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from ..algebra import SpinQuantumNumber
from ..dynamics import UnitaryPropagator
from ..errors import ConfigError, IntegratorDivergedError, QuadspinError
from ..metrics import rate_map
from ..states import QuantumState, css
from ..wigner import SphereGrid, wigner_distribution
from .config import RunConfig, apply_overrides, parse_config_file
from .io import write_csv, write_wigner_csv
from .runner import SweepSpec, parse_sweep_values, run_single, run_sweep
from .scenarios import SCENARIOS, run_scenario


def _load_config(args) -> RunConfig:
    config = parse_config_file(args.config) if args.config else RunConfig()
    if getattr(args, "set", None):
        config = apply_overrides(config, args.set)
    return config.validate()


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, _, b = text.lower().partition("x")
        return int(a), int(b)
    except ValueError:
        raise ConfigError(f"grid must look like 91x180, got {text!r}", field="grid")


def cmd_run(args) -> int:
    config = _load_config(args)
    out_dir = args.output_dir or config.output_dir
    result = run_single(config, out_dir=out_dir, figures=not args.no_figures)
    print(f"wrote {result.csv_path}")
    return 0


def cmd_scenario(args) -> int:
    out = run_scenario(args.name, args.output_dir, workers=args.workers,
                       figures=not args.no_figures)
    print(f"wrote {out}")
    return 0


def cmd_sweep(args) -> int:
    config = _load_config(args)
    sweep = SweepSpec(axis=args.axis,
                      values=parse_sweep_values(args.values, args.axis))
    out_dir = args.output_dir or config.output_dir
    result = run_sweep(config, sweep, out_dir=out_dir, workers=args.workers,
                       figures=not args.no_figures)
    print(f"wrote {result.aggregate_path}")
    if result.failures:
        for failure in result.failures:
            print(f"point {failure['index']} ({args.axis}={failure['value']}) "
                  f"failed: {failure['error']}", file=sys.stderr)
        return 4
    return 0


def cmd_wigner(args) -> int:
    config = _load_config(args)
    tau = args.at
    if tau < 0:
        raise ConfigError("must be >= 0", field="at")
    t = tau / config.f_q_hz
    spin = config.spin()
    initial = css(spin, config.css_direction())
    if config.dephasing_hz == 0.0:
        prop = UnitaryPropagator(config.hamiltonian(), initial.vector)
        state = QuantumState.pure(prop.state_at(t), validate=False)
    else:
        import dataclasses

        from .runner import compute_trajectory
        cfg = dataclasses.replace(config, t_max_in_inverse_fq=max(tau, 1e-9))
        traj = compute_trajectory(cfg)
        state = traj.state(len(traj) - 1)
    n_theta, n_phi = _parse_grid(args.grid)
    field = wigner_distribution(state, SphereGrid.regular(n_theta, n_phi))
    out = Path(args.output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"wigner_tau{tau:g}.csv"
    write_wigner_csv(csv_path, field, spin, {"tau": tau})
    if not args.no_figures:
        from .figures import save_heatmap
        save_heatmap(out / f"wigner_tau{tau:g}.png", field.grid.thetas,
                     field.grid.phis, field.values,
                     f"sphere distribution at tau={tau:g}", "W (1/sr)")
    print(f"wrote {csv_path}")
    return 0


def cmd_rate_map(args) -> int:
    if args.spin < 2:
        raise ConfigError("need 2I >= 2", field="spin")
    if not 0.0 <= args.eta <= 1.0:
        raise ConfigError(f"must lie in [0, 1], got {args.eta}", field="eta")
    spin = SpinQuantumNumber(args.spin)
    n_theta, n_phi = _parse_grid(args.grid)
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = np.arange(n_phi) * (2.0 * math.pi / n_phi)
    q = rate_map(spin, args.eta, thetas, phis)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"rate_map_twoI{args.spin}_eta{args.eta:g}.csv"
    write_csv(csv_path, ["theta", "phi", "q"],
              [np.repeat(thetas, n_phi), np.tile(phis, n_theta), q.reshape(-1)])
    if not args.no_figures:
        from .figures import save_heatmap
        save_heatmap(csv_path.with_suffix(".png"), thetas, phis, q,
                     f"initial squeezing rate (2I={args.spin}, eta={args.eta:g})",
                     "Q")
    print(f"wrote {csv_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadspin",
        description="Squeezing simulations for a single quadrupolar nuclear spin.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_config=True):
        if with_config:
            p.add_argument("--config", help="flat key=value configuration file")
            p.add_argument("--set", action="append", metavar="KEY=VALUE",
                           help="override a configuration key")
        p.add_argument("--output-dir", default=None, help="output directory")
        p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering")

    p = sub.add_parser("run", help="evolve one configuration and report it")
    add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("scenario", help="run a named study preset")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p.add_argument("--output-dir", default="quadspin_out")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("sweep", help="sweep one axis over a value grid")
    add_common(p)
    p.add_argument("--axis", required=True,
                   choices=["eta", "theta_css", "phi_css", "larmor", "spin"])
    p.add_argument("--values", required=True,
                   help="comma list (0,0.5,1) or range start:stop:count")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wigner", help="sphere distribution of an evolved state")
    add_common(p)
    p.add_argument("--at", type=float, required=True,
                   help="evolution time in units of 1/f_Q")
    p.add_argument("--grid", default="91x180")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("rate-map", help="initial squeezing-rate map")
    p.add_argument("--spin", type=int, required=True, help="2I")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--grid", default="91x180")
    p.add_argument("--output-dir", default="quadspin_out")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_rate_map)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IntegratorDivergedError as exc:
        print(f"integrator failure: {exc}", file=sys.stderr)
        return 3
    except QuadspinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
