"""Command-line entry point.

Usage: syndromic train|evaluate|compare|sweep --config <path>
       [--seed N] [--max-iter N] [--mode joint|z_only]
       [--decoder neural|mwpm|ml|minweight] [--out PATH] [--reuse-model PATH]

Exit codes: 0 success, 2 config error, 3 runtime or size-guard error.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .harness import ConfigError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syndromic",
        description="Train and evaluate sampling-based neural decoders for stabilizer codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("train", "train one network per depolarization rate and write model files"),
        ("evaluate", "Monte Carlo evaluation of decoders over the rate grid"),
        ("compare", "joint vs squared-Z-only correlation diagnostic"),
        ("sweep", "sweep max_iter, hidden_layers, or sampler_mode"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a key = value config file")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--max-iter", type=int, default=None, help="override the iteration cap")
        p.add_argument("--mode", choices=("joint", "z_only"), default=None)
        p.add_argument("--decoder", choices=harness.DECODER_IDS, default=None,
                       help="restrict evaluation to a single decoder")
        p.add_argument("--out", default=None, help="override the CSV output path")
        p.add_argument("--reuse-model", default=None,
                       help="use one model file for every rate")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = harness.parse_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.max_iter is not None:
            cfg.max_iter = args.max_iter
        if args.mode is not None:
            cfg.mode = args.mode
        if args.decoder is not None:
            cfg.decoders = (args.decoder,)
        if args.out is not None:
            cfg.out = args.out
        if args.reuse_model is not None:
            cfg.reuse_model = args.reuse_model
        harness.validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "train":
            harness.run_train(cfg)
        elif args.command == "evaluate":
            harness.run_evaluate(cfg)
        elif args.command == "compare":
            harness.run_compare(cfg)
        else:
            harness.run_sweep(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 -- map any runtime failure to exit 3
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
