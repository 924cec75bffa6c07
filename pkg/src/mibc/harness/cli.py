"""Command-line entry point: ``mibc <subcommand> [options]``."""

import argparse
from dataclasses import replace
import logging
import sys

from .config import ConfigError, ScenarioConfig, load_config
from .csvio import emit_csv
from .sweeps import run_ber_vs_conductivity, run_ber_vs_estimation_power, run_ber_vs_snr, \
    run_efficiency_vs_conductivity

COMMANDS = {
    "ber-snr": "BER against target SNR, one curve per sensor depth",
    "ber-conductivity": "BER against soil conductivity at fixed data power",
    "ber-estpower": "BER against channel-estimation power, one curve per conductivity",
    "efficiency": "normalised MI and EM propagation efficiency against conductivity",
}


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="mibc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="YAML scenario file (defaults when omitted)")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--trials", type=_positive_int, help="trials per grid point")
        p.add_argument("--seed", type=_seed, help="64-bit RNG seed")
        p.add_argument("--threads", type=_positive_int, default=1, help="worker threads")
        p.add_argument("--split", action="store_true",
                       help="one file per curve instead of stacked long format")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(args):
    config = load_config(args.config) if args.config else ScenarioConfig()
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    if args.seed is not None:
        config = replace(config, rng_seed=args.seed)
    if args.command == "ber-snr":
        curves = run_ber_vs_snr(config, threads=args.threads)
    elif args.command == "ber-conductivity":
        curves = [run_ber_vs_conductivity(config, threads=args.threads)]
    elif args.command == "ber-estpower":
        curves = run_ber_vs_estimation_power(config, threads=args.threads)
    else:
        curves = list(run_efficiency_vs_conductivity(config))
    paths = emit_csv(curves, args.out, long_format=not args.split)
    skipped = sum(int(c.skipped.sum()) for c in curves)
    for c in curves:
        for msg in c.messages:
            print(f"warning: skipped point {msg}", file=sys.stderr)
    return paths, skipped


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        paths, skipped = run(args)
    except ConfigError as exc:
        print(f"mibc: config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"mibc: error: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
