"""Command line entry point: ``vcdyn {run,presets,coefficients}``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical invariant
violation, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from .algebra import DensityMatrixError
from .config import CONFIG_KEYS, ConfigError, read_config_file
from .dynamics import ConvergenceError, IntegrationError
from .geometry import Geometry, configuration_preset, coupling_coefficients, normalize_angles
from .presets import list_presets
from .runner import fmt, run_scenario

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vcdyn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario (config file, flags, or figure preset)")
    run.add_argument("--config", help="key = value file, or a trajectory CSV to replay")
    for key in CONFIG_KEYS:
        run.add_argument(_flag(key), dest=key, default=None)
    run.add_argument("--parallel", type=int, default=1, help="worker processes for sweeps")

    sub.add_parser("presets", help="list the figure presets")

    co = sub.add_parser("coefficients", help="tabulate the coupling coefficients")
    co.add_argument("--preset", choices=["I", "II"])
    co.add_argument("--r", "--r-over-lambda", dest="r", type=float, required=True)
    co.add_argument("--theta", type=float)
    co.add_argument("--phi", type=float)
    co.add_argument("--gamma", type=float, default=1.0)
    co.add_argument("--csv", action="store_true", help="machine-readable output")
    return parser


def coefficient_table(args) -> str:
    if args.preset:
        g = configuration_preset(args.preset, args.r, args.gamma)
        theta = g.theta if args.theta is None else args.theta
        phi = g.phi if args.phi is None else args.phi
    else:
        if args.theta is None or args.phi is None:
            raise UsageError("coefficients: give --preset or both --theta and --phi")
        theta, phi = args.theta, args.phi
    try:
        geom = Geometry(args.r, *normalize_angles(theta, phi), args.gamma)
    except ValueError as exc:
        raise UsageError(f"coefficients: {exc}") from None
    rows = [("xi", geom.xi), *coupling_coefficients(geom).as_dict().items()]
    if args.csv:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value"])
        w.writerows((k, fmt(v)) for k, v in rows)
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{k:<10} {fmt(v):>20}" for k, v in rows)


def _run(args) -> int:
    raw = read_config_file(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        value = getattr(args, key)
        if value is not None:
            raw[key] = value
    output = raw.pop("output", None)
    if args.parallel < 1:
        raise UsageError("--parallel must be at least 1")
    paths = run_scenario(raw, output=output, parallel=args.parallel)
    for p in paths:
        print(p)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        if args.command == "presets":
            print(list_presets())
        elif args.command == "coefficients":
            print(coefficient_table(args))
        else:
            return _run(args)
    except (UsageError, ConfigError, DensityMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, ConvergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
