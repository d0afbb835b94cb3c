"""Command-line front end: ``lambdatunnel {simulate,sweep,wells,scenarios}``."""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, analysis, config, dynamics, wells
from .analysis import TwoLevelInit
from .errors import ConfigError, NumericalError, TunnelingError
from .qsys import initial_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
WORKERS_ENV = "LAMBDATUNNEL_WORKERS"

TRAJECTORY_HEADER = [
    "t", "re_b1", "im_b1", "re_b2", "im_b2", "re_b3", "im_b3",
    "p_left", "p_right", "p3", "norm2", "p_bright", "p_dark",
]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


class Reporter:
    """Summary printer; goes to stderr when the CSV itself is written to stdout."""

    def __init__(self, quiet: bool):
        self.quiet = quiet
        self.stream = sys.stdout

    def __call__(self, key, value=None):
        if self.quiet:
            return
        if value is None:
            line = key
        elif isinstance(value, float):
            line = f"{key}: {fmt(value)}"
        else:
            line = f"{key}: {value}"
        print(line, file=self.stream)


def _to_stdout(path) -> bool:
    return path is None or path == "-"


def _open_output(path):
    if _to_stdout(path):
        return _StdoutHandle()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="", encoding="ascii")


class _StdoutHandle:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def write_trajectory_csv(handle, traj: dynamics.Trajectory):
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    s = traj.states
    params = traj.params
    if params.omega > 0:
        u1, u2 = params.mixing()
        p_bright = np.abs(u1 * s[:, 0] + u2 * s[:, 1]) ** 2
        p_dark = np.abs(u2 * s[:, 0] - u1 * s[:, 1]) ** 2
    else:
        p_bright = p_dark = np.full(len(traj), math.nan)
    cols = [traj.times, s[:, 0].real, s[:, 0].imag, s[:, 1].real, s[:, 1].imag,
            s[:, 2].real, s[:, 2].imag, traj.p_left, traj.p_right, traj.p3, traj.norm2,
            p_bright, p_dark]
    for k in range(len(traj)):
        writer.writerow([fmt(c[k]) for c in cols])


def _lower_init(run: config.RunConfig):
    if run.init.b3 != 0:
        return None
    return TwoLevelInit(run.init.b1, run.init.b2)


def predict(run: config.RunConfig, t_final: float):
    """Closed-form (P_L, P_R) for the run when one applies; entries may be None."""
    p = run.params
    lower = _lower_init(run)
    if p.omega == 0.0:
        if lower is None:
            return None, "none"
        return analysis.free_tunneling(lower, p.delta, t_final), "free tunneling"
    if p.delta1 != p.delta2:
        return None, "none"
    if run.init_kind == "dark":
        return analysis.dark_init_localization(p), "dark-state start"
    if lower is None:
        return None, "none"
    if run.mode == "settle":
        res = analysis.general_init_localization(lower, p)
        return (res.p_left_inf, res.p_right_inf), "asymptotic localization"
    if p.omega2_rabi == -p.omega1_rabi:
        # dark state is the right well; P_R is conserved, P_L is not
        return (None, analysis.asymptotic_right_trapping(lower).p_right_inf), "right trapping"
    return None, "none"


def run_simulation(run: config.RunConfig) -> dynamics.Trajectory:
    if run.mode == "settle":
        return dynamics.integrate_until_settled(run.params, run.init, run.eps, run.t_max,
                                                run.dt, run.sample_every)
    return dynamics.integrate(run.params, run.init, run.t_end, run.dt, run.sample_every)


def cmd_simulate(args, out: Reporter) -> int:
    parser = config.load_parser(args.config, args.scenario, args.override)
    run = config.load_run_config(parser)
    output = args.out or run.output
    traj = run_simulation(run)
    if _to_stdout(output):
        out.stream = sys.stderr
    with _open_output(output) as fh:
        write_trajectory_csv(fh, traj)
    final_l, final_r = float(traj.p_left[-1]), float(traj.p_right[-1])
    out(f"scenario: {run.scenario}")
    out("t_final", float(traj.times[-1]))
    out("steps", traj.n_steps if not traj.settled else int(round(traj.times[-1] / traj.dt_effective)))
    out("p_left", final_l)
    out("p_right", final_r)
    out("p3", float(traj.p3[-1]))
    out("norm2", float(traj.norm2[-1]))
    prediction, label = predict(run, float(traj.times[-1]))
    out("prediction", label)
    if prediction is not None:
        for name, value, got in (("p_left", prediction[0], final_l), ("p_right", prediction[1], final_r)):
            if value is not None:
                out(f"{name}_analytic", float(value))
                out(f"{name}_deviation", abs(got - value))
    return EXIT_OK


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
        return max(1, value)
    return os.cpu_count() or 1


def _sweep_point(sweep: config.SweepConfig, values):
    base = sweep.base
    params = config.make_params(sweep.point_values(values))
    init = base.init
    if base.init_kind in ("dark", "bright"):
        init = initial_state(base.init_kind, params)
    traj = dynamics.integrate_until_settled(params, init, base.eps, base.t_max, base.dt)
    numeric = (float(traj.p_left[-1]), float(traj.p_right[-1]))
    if init.b3 == 0 and params.delta1 == params.delta2:
        res = analysis.general_init_localization(TwoLevelInit(init.b1, init.b2), params)
        analytic = (res.p_left_inf, res.p_right_inf)
    else:
        analytic = (math.nan, math.nan)
    return params, numeric, analytic, float(traj.times[-1])


def run_sweep(sweep: config.SweepConfig, workers: int = 1):
    grid = sweep.grid()
    if workers <= 1 or len(grid) == 1:
        results = [_sweep_point(sweep, v) for v in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda v: _sweep_point(sweep, v), grid))
    return grid, results


def cmd_sweep(args, out: Reporter) -> int:
    parser = config.load_parser(args.config, args.scenario, args.override)
    sweep = config.load_sweep_config(parser)
    output = args.out or sweep.base.output
    workers = _workers()
    grid, results = run_sweep(sweep, workers)
    if _to_stdout(output):
        out.stream = sys.stderr
    header = list(sweep.names) + [
        "omega1", "omega2", "delta1", "delta2", "gamma",
        "p_left_numeric", "p_right_numeric", "p_left_analytic", "p_right_analytic",
        "dev_left", "dev_right", "t_settled",
    ]
    max_dev = 0.0
    with _open_output(output) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for values, (p, num, ana, t_settled) in zip(grid, results):
            dev = (abs(num[0] - ana[0]), abs(num[1] - ana[1]))
            if not math.isnan(dev[0]):
                max_dev = max(max_dev, *dev)
            row = list(values) + [p.omega1_rabi, p.omega2_rabi, p.delta1, p.delta2, p.gamma,
                                  num[0], num[1], ana[0], ana[1], dev[0], dev[1], t_settled]
            writer.writerow([fmt(x) for x in row])
    out(f"points: {len(grid)}")
    out("max_abs_deviation", max_dev)
    return EXIT_OK


def _eigen_rows(label, sol: wells.WellSolution):
    rows = []
    for k, energy in enumerate(sol.eigenvalues):
        psi = sol.eigenfunctions[k]
        rows.append([label, str(k), fmt(energy), sol.parity_flags[k], fmt(sol.left_fraction(psi))])
    return rows


def _sibling(path: str, suffix: str) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}_{suffix}{p.suffix or '.csv'}")


def cmd_wells(args, out: Reporter) -> int:
    parser = config.load_parser(args.config, args.scenario, args.override)
    base_dir = Path(args.config).parent if args.config else None
    cfg = config.load_wells_config(parser, base_dir)
    output = args.out or cfg.output
    ground = wells.solve_well(cfg.ground, cfg.n_points, cfg.n_states)
    excited = None
    summary = [("delta", ground.delta)]
    if cfg.excited is not None:
        excited = wells.solve_well(cfg.excited, cfg.n_points, cfg.n_states)
        o1, o2 = wells.rabi_overlaps(ground, excited, cfg.mu_e, cfg.excited_index)
        ratio = o2 / o1 if o1 != 0 else math.nan
        summary += [("omega1_rabi", o1), ("omega2_rabi", o2), ("ratio", ratio),
                    ("ratio_deviation", abs(ratio + 1.0))]

    if _to_stdout(output):
        out.stream = sys.stderr
    rows = _eigen_rows("ground", ground)
    if excited is not None:
        rows += _eigen_rows("excited", excited)
    with _open_output(output) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["well", "index", "energy", "parity", "left_fraction"])
        writer.writerows(rows)
    if not _to_stdout(output):
        with open(_sibling(output, "summary"), "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["quantity", "value"])
            for name, value in summary:
                writer.writerow([name, fmt(value)])
        if cfg.eigenfunctions:
            _write_eigenfunctions(_sibling(output, "eigenfunctions"), ground, excited)

    out("ground_eigenvalues", " ".join(fmt(e) for e in ground.eigenvalues))
    out("ground_parity", " ".join(ground.parity_flags))
    for name, value in summary:
        out(name, float(value))
    return EXIT_OK


def _write_eigenfunctions(path, ground, excited):
    cols = [("x", ground.grid), ("v_ground", ground.potential)]
    cols += [(f"psi_ground_{k}", f) for k, f in enumerate(ground.eigenfunctions)]
    if excited is not None:
        cols.append(("v_excited", excited.potential))
        cols += [(f"psi_excited_{k}", f) for k, f in enumerate(excited.eigenfunctions)]
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([name for name, _ in cols])
        for k in range(len(ground.grid)):
            writer.writerow([fmt(c[k]) for _, c in cols])


def cmd_scenarios(args, out: Reporter) -> int:
    for name in config.scenario_names():
        parser = config.load_parser(scenario=name)
        print(f"{name:<24} {config.command_of(parser):<9} {config.description(parser)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lambdatunnel",
        description="Dark-state suppression of double-well tunneling: simulations, sweeps, well solves.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("simulate", cmd_simulate, "integrate one configuration and write its trajectory"),
        ("sweep", cmd_sweep, "sweep one or two parameters, comparing numeric and analytic limits"),
        ("wells", cmd_wells, "solve ground/excited double wells and report Rabi overlaps"),
    ):
        p = sub.add_parser(name, help=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", metavar="PATH", help="INI configuration file")
        src.add_argument("--scenario", metavar="NAME", help="built-in scenario (see 'scenarios')")
        p.add_argument("--out", metavar="PATH", help="CSV output path ('-' for stdout)")
        p.add_argument("--override", metavar="SECTION.KEY=VALUE", action="append", default=[],
                       help="override one config value; repeatable")
        p.add_argument("--quiet", action="store_true", help="suppress the summary")
        p.set_defaults(func=func)
    p = sub.add_parser("scenarios", help="list built-in scenarios")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_scenarios)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Reporter(args.quiet)
    try:
        return args.func(args, out)
    except NumericalError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except TunnelingError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
