"""Command-line entry point ``nmlambda``.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical error.
"""

import argparse
import os
import sys
from importlib import resources
from pathlib import Path

from . import config as cfgmod
from . import runners
from .errors import ConfigError, NumericalError
from .numerics import BACKEND
from .validate import run_validate

DESCRIPTION = "Driven Lambda atoms in Lorentzian cavities: dynamics, entropy and heralded entanglement."
OUTPUT_DIR_ENV = "NMLAMBDA_OUTPUT_DIR"
PRESETS = ("fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6a", "fig6b", "fig7a", "fig7b")
RUNNERS = {
    "amplitudes": runners.run_amplitudes,
    "entropy": runners.run_entropy,
    "negativity": runners.run_negativity,
    "sweep": runners.run_sweep,
    "density": runners.run_density,
}

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("--config", help="scenario file (key = value lines)")
    p.add_argument("--out", help="output CSV path (default: stdout or $%s)" % OUTPUT_DIR_ENV)
    p.add_argument("--quad-order", type=int, help="Gauss-Legendre order for sphere averages")
    p.add_argument("--pulse", choices=("lorentzian", "flat"))
    p.add_argument("--time-scale", choices=("kappa", "g"))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config value (repeatable)")


def build_parser():
    parser = _Parser(prog="nmlambda", description=DESCRIPTION)
    parser.add_argument("--version", action="store_true", help="print version and kernel backend")
    sub = parser.add_subparsers(dest="command")
    for name in RUNNERS:
        _add_common(sub.add_parser(name))
    fig = sub.add_parser("figure", help="run a shipped figure preset")
    fig.add_argument("preset", choices=PRESETS)
    _add_common(fig)
    val = sub.add_parser("validate", help="run the self-check suite")
    val.add_argument("--level", choices=("quick", "full"), default="quick")
    val.add_argument("--tol-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def preset_text(name):
    return resources.files("nmlambda.presets").joinpath(f"{name}.cfg").read_text()


def _overrides(args):
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k not in cfgmod.KNOWN_KEYS:
            raise ConfigError(f"unknown key {k!r}")
        out[k] = v
    if args.quad_order is not None:
        out["quad_order"] = str(args.quad_order)
    if args.pulse:
        out["pulse"] = args.pulse
    if args.time_scale:
        out["time_scale"] = args.time_scale
    return out


def _output_path(args, default_name):
    if args.out:
        return Path(args.out)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{default_name}.csv"
    return None


def _emit(table, path):
    text = table.to_csv()
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    if table.warnings:
        print(f"warning: {table.warnings} cell(s) failed numerically and were left empty",
              file=sys.stderr)


def _run_dataset(args):
    if args.threads < 1:
        raise ConfigError("--threads must be positive")
    if args.command == "figure":
        base, series = cfgmod.parse_text(preset_text(args.preset), f"preset {args.preset}")
        if args.config:
            extra, extra_series = cfgmod.load_file(args.config)
            base.update(extra)
            series = extra_series or series
        command = base.pop("command", None)
        if command not in RUNNERS:
            raise ConfigError(f"preset {args.preset} names no valid command")
        default_name = args.preset
    else:
        base, series = cfgmod.load_file(args.config) if args.config else ({}, [])
        base.pop("command", None)
        command = default_name = args.command
    cfgs = cfgmod.scenarios(base, series, _overrides(args))
    table = RUNNERS[command](cfgs, threads=args.threads)
    _emit(table, _output_path(args, default_name))
    return EXIT_OK


def _run_validate(args):
    results, elapsed = run_validate(args.level, args.tol_scale)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed in {elapsed:.2f} s "
          f"(backend: {BACKEND})")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help and on usage errors; report the code instead
        return exc.code
    if args.version:
        from importlib.metadata import version

        print(f"nmlambda {version('artifact')} ({BACKEND} kernels)")
        return EXIT_OK
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "validate":
            return _run_validate(args)
        return _run_dataset(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
