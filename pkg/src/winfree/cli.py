"""Command-line interface and experiment orchestration.

Subcommands: simulate, check, montecarlo, preset, version. The config
argument of the first three is a path to a JSON document or the name of a
bundled preset. Seed precedence, highest first: the --seed flag, the
config's monte_carlo.master_seed, the WINFREE_SEED environment variable,
then 0.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .backends import backend_name
from .config import ConfigError, parse_config
from .experiments import (
    PRESET_NAMES,
    first_exit,
    monte_carlo_locking,
    preset_document,
    rotation_numbers,
)
from .integrate import (
    SimulationAbort,
    generate_brownian,
    simulate_deterministic,
    simulate_first_order,
    simulate_stochastic,
)
from .output import write_json, write_plot_script, write_trajectory_csv, write_trajectory_json
from .theory import check_det_theorem, check_stoch_theorem

__all__ = ["main", "run", "load_config", "resolve_seed"]


def load_config(ref):
    """Load a config from a file path or a preset name."""
    path = Path(ref)
    if path.is_file():
        try:
            return parse_config(path.read_text())
        except ConfigError as e:
            raise ConfigError(e.path, f"{ref}: {e}") from None
    if ref in PRESET_NAMES:
        return parse_config(preset_document(ref))
    raise ConfigError("", f"{ref!r} is neither a config file nor a preset name "
                          f"(presets: {', '.join(PRESET_NAMES)})")


def resolve_seed(flag_seed, config):
    """Apply the seed precedence chain and return a 64-bit integer."""
    if flag_seed is not None:
        return flag_seed
    if config.monte_carlo is not None and config.monte_carlo.master_seed is not None:
        return config.monte_carlo.master_seed
    env = os.environ.get("WINFREE_SEED")
    if env is not None and env != "":
        try:
            value = int(env)
        except ValueError:
            raise ConfigError("", f"WINFREE_SEED must be an integer, got {env!r}") from None
        if not (0 <= value < 2**64):
            raise ConfigError("", "WINFREE_SEED must fit in 64 bits")
        return value
    return 0


def _condition_report(config):
    if config.theory is None:
        raise ConfigError("theory", "condition checks need a theory block with big_d")
    if config.model == "second_order_stoch":
        if config.theory.delta is None:
            raise ConfigError("theory.delta", "the stochastic conditions need delta")
        report = check_stoch_theorem(
            config.params, config.initial, config.theory.big_d, config.theory.delta, config.noise
        )
    else:
        report = check_det_theorem(config.params, config.initial, config.theory.big_d)
    return report


def _simulate_trajectory(config, seed):
    if config.model == "first_order":
        return simulate_first_order(
            config.params, config.initial.theta, config.grid,
            coupling_scale=config.coupling_scale,
        )
    if config.model == "second_order_det":
        return simulate_deterministic(
            config.params, config.initial, config.grid,
            coupling_scale=config.coupling_scale,
        )
    path = generate_brownian(seed, config.grid, stream=0)
    return simulate_stochastic(
        config.params, config.initial, config.grid, config.noise, path,
        coupling_scale=config.coupling_scale,
    )


def run(config, *, seed=None, out_dir=None, fmt=None, threads=None,
        do_simulate=True, do_check=True, do_mc=True, quiet=False):
    """Execute an experiment config and write its artifacts.

    Returns a process exit status: 0 on success, 1 on a simulation abort
    (the aborting step is reported on stderr).
    """
    seed = resolve_seed(seed, config)
    out = Path(out_dir if out_dir is not None else (config.output.dir or "."))
    out.mkdir(parents=True, exist_ok=True)
    fmt = fmt or config.output.format

    def say(msg):
        if not quiet:
            print(msg)

    if do_check and config.theory is not None:
        report = _condition_report(config)
        write_json(out / "condition_report.json", report.to_dict())
        say(f"conditions satisfied: {report.satisfied}")
        for m in report.margins:
            say(f"  margin {m.label}: {m.value:+.6g} (require {m.require}) "
                f"{'ok' if m.ok else 'VIOLATED'}")
    elif do_check and not do_simulate and not do_mc:
        # an explicit check-only invocation must not silently do nothing
        _condition_report(config)

    if do_simulate:
        try:
            traj = _simulate_trajectory(config, seed)
        except SimulationAbort as e:
            print(f"simulation aborted: non-finite state at step {e.step}", file=sys.stderr)
            return 1
        if fmt == "csv":
            write_trajectory_csv(out / "trajectory.csv", traj)
        else:
            write_trajectory_json(out / "trajectory.json", traj)
        write_plot_script(out / "plot.gp", "trajectory.csv", traj.n)
        analysis = {}
        if config.analysis.rotation:
            est = rotation_numbers(traj)
            analysis["rotation"] = {
                "per_oscillator": est.per_oscillator.tolist(),
                "windowed": est.windowed.tolist(),
                "spread": est.spread,
            }
            say(f"windowed rotation spread: {est.spread:.6g}")
        if config.analysis.exit_threshold is not None:
            rep = first_exit(traj, config.analysis.exit_threshold)
            analysis["first_exit"] = {
                "threshold": rep.threshold,
                "exit_step": rep.exit_step,
                "exited": rep.exited,
            }
            if rep.exited:
                say(f"diameter exceeded {rep.threshold:.6g} at step {rep.exit_step}")
            else:
                say(f"diameter stayed within {rep.threshold:.6g} "
                    f"(sup {float(traj.diameter_theta.max()):.6g})")
        if analysis:
            write_json(out / "analysis.json", analysis)
        say(f"trajectory written to {out}")

    if do_mc and config.monte_carlo is not None:
        mc = config.monte_carlo
        delta = config.theory.delta if config.theory is not None else None
        result = monte_carlo_locking(
            config.params, config.initial, config.grid, config.noise,
            mc.threshold, mc.n_paths, seed,
            delta=delta, n_workers=threads, coupling_scale=config.coupling_scale,
        )
        write_json(out / "monte_carlo.json", result.to_dict())
        lo, hi = result.wilson_ci_95
        say(f"bounded paths: {result.n_bounded}/{result.n_paths} "
            f"(empirical {result.empirical_prob:.4f}, 95% CI [{lo:.4f}, {hi:.4f}])")
        if result.theoretical_bound is not None:
            say(f"theoretical lower bound: {result.theoretical_bound:.6g}")
        if result.aborted_paths:
            print(f"warning: {len(result.aborted_paths)} path(s) aborted non-finite "
                  f"(counted as exited): {list(result.aborted_paths)[:10]}", file=sys.stderr)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="winfree",
        description="Simulate and analyze second-order Winfree oscillator networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, threads=False):
        p.add_argument("config", help="path to a JSON config, or a preset name")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help="trajectory format (default from config)")
        if threads:
            p.add_argument("--threads", type=int, default=None,
                           help="worker processes (default: all cores)")

    add_common(sub.add_parser("simulate", help="run one trajectory and write artifacts"))
    add_common(sub.add_parser("check", help="evaluate the locking conditions only"))
    add_common(sub.add_parser("montecarlo", help="estimate the locking probability"),
               threads=True)

    p_preset = sub.add_parser("preset", help="show a bundled preset")
    p_preset.add_argument("name", choices=list(PRESET_NAMES))
    p_preset.add_argument("--emit-config", action="store_true",
                          help="print the full config document")

    sub.add_parser("version", help="print version and backend")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "version":
            print(f"winfree {__version__} (backend: {backend_name()})")
            return 0
        if args.command == "preset":
            if args.emit_config:
                print(json.dumps(parse_config(preset_document(args.name)).to_dict(), indent=2))
            else:
                doc = preset_document(args.name)
                print(f"{args.name}: model={doc['model']}, n={doc['params']['n']}, "
                      f"kappa={doc['params']['kappa']}, gamma={doc['params']['gamma']}, "
                      f"steps={doc['grid']['steps']}")
            return 0

        config = load_config(args.config)
        if args.seed is not None and not (0 <= args.seed < 2**64):
            print("error: --seed must fit in 64 bits", file=sys.stderr)
            return 2
        if args.command == "simulate":
            return run(config, seed=args.seed, out_dir=args.out, fmt=args.format,
                       do_mc=False)
        if args.command == "check":
            return run(config, seed=args.seed, out_dir=args.out, fmt=args.format,
                       do_simulate=False, do_mc=False)
        if args.command == "montecarlo":
            if config.monte_carlo is None:
                print("error: config has no monte_carlo block", file=sys.stderr)
                return 2
            return run(config, seed=args.seed, out_dir=args.out, fmt=args.format,
                       threads=args.threads, do_simulate=False, do_check=False)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
