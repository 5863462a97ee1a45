"""Command-line front end: ``ctcsim {dctc,pctc,verify}``.

Sweeps read an optional flat ``key=value`` config file; command-line flags
override file values.  Exit codes: 0 success, 1 validation error, 2
verification failure, 3 forbidden initial data on a single-point run.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .sweep import ConfigError, RunConfig, parse_config, run_sweep, single_point
from .verify import available_suites, run_suite

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFY_FAILED = 2
EXIT_FORBIDDEN = 3


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route everything through
    # _CliError so validation problems consistently exit 1.
    def error(self, message):
        raise _CliError(message)


def _build_parser():
    parser = _Parser(prog="ctcsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for model in ("dctc", "pctc"):
        p = sub.add_parser(model, help=f"run a {model} parameter sweep")
        p.add_argument("--config", metavar="PATH", help="flat key=value config file")
        p.add_argument("--N", type=int, dest="n_levels", help="clock levels (>= 2)")
        p.add_argument("--omega", help="comma-separated vacuum weights in [0, 1]")
        if model == "dctc":
            p.add_argument("--g", help="comma-separated trapped-vacuum weights in [0, 1]")
        p.add_argument(
            "--dt-grid",
            dest="dt_grid",
            metavar="START:STOP:POINTS",
            help="delay grid in units of t_perp",
        )
        p.add_argument("--e1", type=float, help="clock ground energy")
        p.add_argument(
            "--constrained",
            metavar="P,Q",
            help="evolution-suppressing configuration (delay P*N*t_perp)",
        )
        p.add_argument("--observables", help="comma-separated subset to emit")
        p.add_argument("--out", metavar="PATH", help="output CSV path ('-' for stdout)")

    v = sub.add_parser("verify", help="run self-verification suites")
    v.add_argument(
        "suite",
        choices=available_suites() + ("all",),
        help="which suite to run",
    )
    v.add_argument("--tol", type=float, help="override every check's tolerance")
    return parser


def _merge_config(args, model):
    if args.config is not None:
        with open(args.config, encoding="utf-8") as handle:
            config = parse_config(handle.read())
        if config.model != model:
            config = replace(config, model=model)
    else:
        config = RunConfig(model=model)

    overrides = {}
    if args.n_levels is not None:
        overrides["n_levels"] = args.n_levels
    if args.omega is not None:
        overrides["omegas"] = _float_list(args.omega, "--omega")
    if getattr(args, "g", None) is not None:
        overrides["gs"] = _float_list(args.g, "--g")
    if args.dt_grid is not None:
        parts = args.dt_grid.split(":")
        if len(parts) != 3:
            raise ConfigError("--dt-grid must be START:STOP:POINTS")
        try:
            overrides["dt_grid"] = (float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ConfigError(f"--dt-grid: {exc}") from exc
    if args.e1 is not None:
        overrides["e1"] = args.e1
    if args.constrained is not None:
        parts = args.constrained.split(",")
        if len(parts) != 2:
            raise ConfigError("--constrained must be P,Q")
        try:
            overrides["constrained"] = (int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise ConfigError(f"--constrained: {exc}") from exc
    if args.observables is not None:
        overrides["observables"] = tuple(
            name.strip() for name in args.observables.split(",") if name.strip()
        )
    if args.out is not None:
        overrides["output_path"] = args.out
    return replace(config, **overrides) if overrides else config


def _float_list(text, flag):
    try:
        values = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"{flag}: {exc}") from exc
    if not values:
        raise ConfigError(f"{flag}: empty list")
    return values


def _run_model(args, model):
    config = _merge_config(args, model)
    result = run_sweep(config)
    csv_text = result.to_csv()
    if config.output_path == "-":
        sys.stdout.write(csv_text)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(csv_text)
    if result.has_forbidden and single_point(config):
        print(
            "forbidden initial data: the post-selected norm vanishes at the "
            "requested point",
            file=sys.stderr,
        )
        return EXIT_FORBIDDEN
    return EXIT_OK


def _run_verify(args):
    results = run_suite(args.suite, tol=args.tol)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return _run_verify(args)
        return _run_model(args, args.command)
    except (_CliError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
