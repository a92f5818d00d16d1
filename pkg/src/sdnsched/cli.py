"""Command-line entry points: single runs, parameter sweeps, topology dumps.

Exit codes: 0 success, 2 configuration error, 3 invariant violation during
simulation.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import config as cfg
from . import engine
from .metrics import SLOT_CSV_HEADER
from .state import ContractViolation
from .topology import TopologyError, comm_costs, dump_text

SWEEP_CSV_HEADER = "axis_value,replication,avg_total_cost,avg_backlog,qc_var,avg_resp_ms"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3


def _say(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg, flush=True)


def run_command(config_path: str, out_dir: str, seed: int | None, quiet: bool) -> int:
    try:
        config = cfg.load(config_path)
    except cfg.ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if seed is not None:
        config = config.with_seed(seed)
    os.makedirs(out_dir, exist_ok=True)
    slots_path = os.path.join(out_dir, "slots.csv")
    summary_path = os.path.join(out_dir, "summary.yaml")
    try:
        with open(slots_path, "w") as slots_file:
            slots_file.write(SLOT_CSV_HEADER + "\n")
            result = engine.run(
                config,
                slot_callback=lambda rec: slots_file.write(rec.csv_row(config.gamma) + "\n"),
            )
    except (engine.InvariantViolation, ContractViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (TopologyError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    with open(summary_path, "w") as f:
        f.write(result.summary.to_text())
    _say(quiet, f"wrote {slots_path} and {summary_path}")
    _say(
        quiet,
        f"avg_total_cost={result.summary.avg_total_cost:.4f} "
        f"avg_backlog={result.summary.avg_backlog:.2f} "
        f"avg_resp_ms={result.summary.avg_response_ms:.4f}",
    )
    return EXIT_OK


def sweep_command(config_path: str, out_dir: str, seed: int | None, quiet: bool) -> int:
    try:
        config = cfg.load(config_path)
    except cfg.ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if config.sweep is None:
        print("config has no sweep section", file=sys.stderr)
        return EXIT_CONFIG
    if seed is not None:
        config = config.with_seed(seed)
    os.makedirs(out_dir, exist_ok=True)
    rows = []
    try:
        for value in config.sweep.values:
            point = config.with_axis(config.sweep.axis, value)
            for rep in range(config.sweep.replications):
                rep_cfg = point.with_seed(cfg.replication_seed(config.master_seed, rep))
                result = engine.run(rep_cfg)
                s = result.summary
                rows.append(
                    f"{value},{rep},{s.avg_total_cost!r},{s.avg_backlog!r},"
                    f"{s.backlog_variance_across_controllers!r},{s.avg_response_ms!r}"
                )
                _say(quiet, f"{config.sweep.axis}={value} rep={rep}: cost={s.avg_total_cost:.4f}")
    except (engine.InvariantViolation, ContractViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (TopologyError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    sweep_path = os.path.join(out_dir, "sweep.csv")
    with open(sweep_path, "w") as f:
        f.write(SWEEP_CSV_HEADER + "\n")
        f.write("\n".join(rows) + "\n")
    _say(quiet, f"wrote {sweep_path}")
    return EXIT_OK


def topo_command(config_path: str, out_dir: str, quiet: bool) -> int:
    try:
        config = cfg.load(config_path)
        topo = config.build_topology()
        costs = comm_costs(topo, config.computation_cost)
    except (cfg.ConfigError, TopologyError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "topology.txt")
    with open(path, "w") as f:
        f.write(dump_text(topo, costs))
    _say(quiet, f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sdnsched",
        description="Discrete-time switch/controller scheduling simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("run", "simulate one configuration and write slots.csv + summary.yaml"),
        ("sweep", "run the config's sweep section and write sweep.csv"),
        ("topo", "dump the configured topology and its cost matrix"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="YAML config path")
        p.add_argument("--out-dir", default="out", help="output directory")
        p.add_argument("--quiet", action="store_true")
        if name != "topo":
            p.add_argument("--seed", type=int, default=None, help="override master seed")
    args = parser.parse_args(argv)
    if args.command == "run":
        return run_command(args.config, args.out_dir, args.seed, args.quiet)
    if args.command == "sweep":
        return sweep_command(args.config, args.out_dir, args.seed, args.quiet)
    return topo_command(args.config, args.out_dir, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
