"""Command-line entry point: ``qactive run|spectrum|pump|verify``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import KNOWN_KEYS, PRESETS, ConfigError, config_from_mapping, load_config
from .experiment import run_experiment
from .gauge import EigenSolverError, SpectrumError
from .observables import NumericalBlowUp
from .outputs import write_csv
from .pump import RateModel, closed_form, integrate_rate_equations, stationary_ratio

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_BLOWUP, EXIT_IO = 0, 2, 3, 4, 5

log = logging.getLogger("qactive")


def parse_overrides(tokens: list[str]) -> dict:
    """``--params.g 1`` or ``--params.g=1``; values are JSON when they parse as JSON."""
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key, eq, value = tok[2:].partition("=")
        if not eq:
            if i + 1 >= len(tokens):
                raise ConfigError("missing value", key)
            value = tokens[i + 1]
            i += 1
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key; known keys: {', '.join(KNOWN_KEYS)}", key)
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
        i += 1
    return out


def _resolve(args, extra: list[str], **forced):
    if args.config:
        base = load_config(args.config).to_dict()
    else:
        base = {"preset": args.preset} if args.preset else {}
        if args.preset:
            # resolve the preset first so that overrides win over its values
            base = config_from_mapping(base).to_dict()
    base.update(parse_overrides(extra))
    base.update(forced)
    if args.out:
        base["output.dir"] = args.out
    return config_from_mapping(base)


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="JSON config (a run manifest also works)")
    src.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--out", metavar="DIR", help="output directory (overrides output.dir)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qactive",
        description="Non-Hermitian quantum walk simulator for a quantum active particle.",
        epilog="Any config key can be overridden with a flag of the same dotted name, "
               "e.g. --params.g 1 --lattice.extent_x 401.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a config or preset")
    _add_source(run)

    spec = sub.add_parser("spectrum", help="dense spectra of U(g) for the values in spectrum.g")
    _add_source(spec)

    pump = sub.add_parser("pump", help="integrate the two-level rate equations")
    pump.add_argument("--w", type=float, default=0.25)
    pump.add_argument("--g", type=float, nargs="+", default=[0.0, 0.5, 1.0])
    pump.add_argument("--n1", type=float, default=1.0, help="initial ground occupation")
    pump.add_argument("--n2", type=float, default=0.0, help="initial excited occupation")
    pump.add_argument("--t-max", type=float, default=100.0)
    pump.add_argument("--dt", type=float, default=0.05)
    pump.add_argument("--out", metavar="DIR", default="out")

    ver = sub.add_parser("verify", help="run the acceptance checks")
    ver.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def _cmd_run(args, extra, **forced) -> int:
    cfg = _resolve(args, extra, **forced)
    result = run_experiment(cfg)
    print(f"wrote {len(result.files)} files to {result.out_dir} in {result.wall_time:.2f}s")
    if result.eigenpair is not None:
        pair = result.eigenpair
        print(f"eigenvalue {pair.eigenvalue.real:.16f}{pair.eigenvalue.imag:+.16f}i "
              f"residual {pair.residual:.2e}")
    return EXIT_OK


def _cmd_pump(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for g in args.g:
        model = RateModel(w=args.w, g=g, n1=args.n1, n2=args.n2)
        traj = integrate_rate_equations(model, args.t_max, args.dt)
        exact = closed_form(model, traj.t)
        with np.errstate(divide="ignore"):
            ratio = traj.ratio
        rows = zip(traj.t, traj.n1, traj.n2, ratio, exact.n1, exact.n2)
        path = write_csv(out / f"pump_g{format(g, 'g')}.csv",
                         ["t", "N1", "N2", "ratio", "N1_exact", "N2_exact"], rows)
        print(f"g={g:g}: N2/N1 at t={args.t_max:g} is {ratio[-1]:.10g}, "
              f"stationary e^(4g) = {stationary_ratio(g):.10g} -> {path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.level)
    return EXIT_OK if all(r.passed for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if extra and args.command not in ("run", "spectrum"):
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        if args.command == "run":
            return _cmd_run(args, extra)
        if args.command == "spectrum":
            return _cmd_run(args, extra, experiment="spectrum")
        if args.command == "pump":
            return _cmd_pump(args)
        return _cmd_verify(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EigenSolverError, SpectrumError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except NumericalBlowUp as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except ValueError as exc:
        # parameter errors raised below the config layer
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
