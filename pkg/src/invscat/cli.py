"""Command line entry point: ``invscat {forward,invert,sweep,plot}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiments
from .fileio import ExperimentConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invscat",
        description="Reconstruct a potential from fixed-incidence scattering amplitudes.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="synthesize exact and noisy amplitude data")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("invert", help="reconstruct the potential from a dataset file")
    p.add_argument("--config", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="noise-level sweep: one (delta*, delta, err) row per level")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("plot", help="plot one grid plane of an inversion report")
    p.add_argument("--report", required=True, help="cells.tsv written by 'invert'")
    p.add_argument("--axis", choices=("x", "y", "z"), default="z")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--out", help="output .svg path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "plot":
            print(experiments.cmd_plot(args.report, args.axis, args.index, args.out))
            return 0
        config = ExperimentConfig.from_file(args.config)
        if args.command == "forward":
            print(experiments.cmd_forward(config, args.out, args.seed))
        elif args.command == "invert":
            result = experiments.cmd_invert(args.dataset, config, args.out)
            for key, value in result["summary"].items():
                print(f"{key} = {value}")
        elif args.command == "sweep":
            path = experiments.cmd_sweep(config, args.out, args.seed)
            print(path.read_text(), end="")
    except (OSError, ValueError, ArithmeticError, RuntimeError) as exc:
        logging.getLogger("invscat").error("%s: %s", type(exc).__name__, exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
