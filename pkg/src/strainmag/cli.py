"""Command-line surface: deterministic run orchestration and file output.

Every subcommand reads one config file (see `strainmag.config` for the
format), applies optional `--set key=value` overrides, writes its
CSV/JSON products plus a run manifest into the output directory, and
exits 0 on success.  Failures print a machine-readable error JSON and
exit with 1 (configuration), 2 (numerical divergence) or 3 (infeasible
plan).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from importlib.metadata import version as pkg_version
from pathlib import Path

import numpy as np

from . import analysis, annealer, energetics, magnet, sllg
from .config import RunConfig, apply_overrides, parse_config
from .errors import ConfigError, StrainmagError


def _load_config(args) -> RunConfig:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    cfg = parse_config(text)
    overrides = list(args.set or [])
    if args.seed is not None:
        overrides += [f"sim.seed={args.seed}", f"anneal.seed={args.seed}"]
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    return cfg


def _out_dir(cfg: RunConfig, args) -> Path:
    out = Path(args.out if args.out else cfg["output.directory"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, command: str, cfg: RunConfig, outputs: list[str], t0: float) -> None:
    manifest = {
        "command": command,
        "config": {k: v for k, v in cfg.values.items()},
        "package_version": pkg_version("strainmag"),
        "outputs": outputs,
        "wall_time_s": time.monotonic() - t0,
    }
    (out / "run_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def cmd_landscape(cfg: RunConfig, out: Path, args) -> list[str]:
    spec = cfg.magnet_spec()
    thetas = np.linspace(-math.pi / 2, math.pi / 2, cfg["landscape.theta_points"])
    table = magnet.landscape_table(spec, cfg["landscape.stresses"], thetas)
    path = out / "landscape.csv"
    with open(path, "w", newline="") as fh:
        magnet.write_landscape_csv(table, fh)
    return [path.name]


def cmd_simulate(cfg: RunConfig, out: Path, args) -> list[str]:
    spec = cfg.magnet_spec()
    sim_cfg = cfg.sim_config()
    n_runs = cfg["sim.runs"]
    outputs = []
    if n_runs == 1:
        trajs = [sllg.simulate(spec, sim_cfg)]
        names = ["trajectory.csv"]
    else:
        trajs = sllg.ensemble(spec, sim_cfg, n_runs, cfg["sim.seed"], workers=args.workers)
        names = [f"trajectory_{i:03d}.csv" for i in range(n_runs)]
    for name, traj in zip(names, trajs):
        with open(out / name, "w", newline="") as fh:
            traj.write_csv(fh)
        outputs.append(name)
    return outputs


def cmd_analyze(cfg: RunConfig, out: Path, args) -> list[str]:
    input_path = Path(cfg["analysis.input"])
    if not input_path.is_absolute():
        input_path = out / input_path
    try:
        with open(input_path) as fh:
            traj = sllg.Trajectory.read_csv(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read trajectory {input_path}: {exc}") from None
    report = analysis.classify_regime(traj, n_bins=cfg["analysis.bins"])
    (out / "regime.json").write_text(report.to_json() + "\n")
    with open(out / "histogram.csv", "w", newline="") as fh:
        report.write_histogram_csv(fh)
    return ["regime.json", "histogram.csv"]


def cmd_reconfig_cost(cfg: RunConfig, out: Path, args) -> list[str]:
    spec = cfg.magnet_spec()
    stack = cfg.piezo_stack()
    report = energetics.reconfig_report(
        stack, spec, cfg["reconfig.stress"], temperature=cfg["magnet.temperature"]
    )
    (out / "reconfig.json").write_text(json.dumps(report, indent=2) + "\n")
    return ["reconfig.json"]


def cmd_retention_plan(cfg: RunConfig, out: Path, args) -> list[str]:
    spec = cfg.magnet_spec()
    targets = {f"section_{i}": tau for i, tau in enumerate(cfg["retention.targets"])}
    rows = energetics.retention_plan(
        spec,
        targets,
        temperature=cfg["magnet.temperature"],
        attempt_time=cfg["retention.attempt_time"],
        allow_barrier_raising=bool(cfg["retention.allow_barrier_raising"]),
    )
    with open(out / "retention_plan.csv", "w", newline="") as fh:
        energetics.write_retention_plan_csv(rows, fh)
    return ["retention_plan.csv"]


def cmd_anneal(cfg: RunConfig, out: Path, args) -> list[str]:
    problem_file = cfg["anneal.problem_file"]
    if not problem_file:
        raise ConfigError("anneal.problem_file is required for the anneal command")
    try:
        text = Path(problem_file).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read problem file: {exc}") from None
    problem = annealer.parse_problem(text)
    schedule = annealer.global_linear(cfg["anneal.beta_start"], cfg["anneal.beta_end"])
    n_restarts = cfg["anneal.restarts"]
    seeds = [sllg.derive_seed(cfg["anneal.seed"], i) for i in range(n_restarts)]
    result = annealer.anneal_restarts(
        problem, schedule, cfg["anneal.n_sweeps"], seeds, workers=args.workers
    )
    (out / "anneal.json").write_text(result.to_json() + "\n")
    with open(out / "energy_trace.csv", "w", newline="") as fh:
        result.write_trace_csv(fh)
    return ["anneal.json", "energy_trace.csv"]


_COMMANDS = {
    "landscape": cmd_landscape,
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "reconfig-cost": cmd_reconfig_cost,
    "retention-plan": cmd_retention_plan,
    "anneal": cmd_anneal,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strainmag",
        description="Strain-reconfigurable stochastic nanomagnet toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_by_cmd = {
        "landscape": "tabulate the in-plane energy landscape over stress",
        "simulate": "run stochastic LLG trajectories",
        "analyze": "classify the fluctuation regime of a trajectory CSV",
        "reconfig-cost": "gate voltage, capacitance and switching energy report",
        "retention-plan": "barrier/stress plan for target retention times",
        "anneal": "p-bit Ising annealing from an edge-list problem file",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=help_by_cmd[name])
        p.add_argument("--config", required=True, help="path to the run config file")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override a config key by dotted path, e.g. 'sim.stress=5 MPa'",
        )
        p.add_argument("--seed", type=int, default=None, help="override sim.seed and anneal.seed")
        p.add_argument("--out", default=None, help="output directory (default from config)")
        p.add_argument(
            "--workers", type=int, default=None,
            help="parallel workers for ensembles/restarts (results are worker-count independent)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        cfg = _load_config(args)
        out = _out_dir(cfg, args)
        outputs = _COMMANDS[args.command](cfg, out, args)
        _write_manifest(out, args.command, cfg, outputs, t0)
    except StrainmagError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(json.dumps({"error": "ValueError", "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
