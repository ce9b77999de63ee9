"""Command line entry point: ``shs6v <subcommand> [--config PATH] [--out DIR] ...``."""
from __future__ import annotations

import argparse
import logging
import sys

from .experiments import KINDS, ConfigError, ExperimentConfig, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shs6v", description="Stochastic higher spin six vertex laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", help="JSON experiment configuration")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="base seed (replica r uses seed XOR r)")
        p.add_argument("--threads", type=int, help="worker threads for replicas")
        p.add_argument("--format", choices=("csv", "svg"), help="svg also renders figures")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        data = ExperimentConfig.from_json(args.config).to_dict()
        if data.get("kind") not in (None, args.command):
            # a config may be shared between subcommands; the subcommand wins
            logging.getLogger(__name__).info("config kind %s overridden by %s", data["kind"], args.command)
    data["kind"] = args.command
    for key, attr in (("out", "out"), ("base_seed", "seed"), ("threads", "threads"), ("format", "format")):
        val = getattr(args, attr)
        if val is not None:
            data[key] = val
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        report = run(cfg)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in report.files:
        print(path)
    for key, val in report.summary.items():
        print(f"{key}: {val}")
    if not report.ok:
        print(f"{cfg.kind}: FAIL", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
