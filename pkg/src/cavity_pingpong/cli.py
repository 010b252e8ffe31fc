"""Scan presets or config files into CSV tables, with optional figures.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .bistability import region_scan, region_scan_standard
from .errors import CavityError, ConfigError, MissingColumnError
from .presets import PRESETS, get_preset
from .results import ScanResult
from .scan import (ScanConfig, compare, config_text, load_config, quantities_for_group,
                   run_scan)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--preset", help="named figure preset (see 'presets')")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--out", help="output CSV path (default: standard output)")
    p.add_argument("--n-max", type=int, help="fixed photon cutoff instead of the adaptive one")
    p.add_argument("--quiet", action="store_true", help="no progress messages")
    p.add_argument("--plot", help="also render the columns to this image file (svg/pdf/png)")


def build_parser():
    ap = _Parser(prog="cavity-pingpong", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    for name, what in (("states", "semiclassical states and bistability roots"),
                       ("kinetics", "semiclassical diffusion and friction"),
                       ("exact", "exact master-equation steady state, D and G")):
        _common(sub.add_parser(name, help=what))
    b = sub.add_parser("bistab-region", help="bistability conditions on a grid")
    b.add_argument("--plane", choices=("nu", "standard"), default="nu")
    b.add_argument("--re", nargs=2, type=float, default=(-20.0, 5.0), metavar=("MIN", "MAX"))
    b.add_argument("--im", nargs=2, type=float, default=(-10.0, 10.0), metavar=("MIN", "MAX"))
    b.add_argument("--C", type=float, default=20.0, help="cooperativity for --plane standard")
    b.add_argument("--delta", nargs=2, type=float, default=(-20.0, 20.0), metavar=("MIN", "MAX"))
    b.add_argument("--theta", nargs=2, type=float, default=(-20.0, 20.0), metavar=("MIN", "MAX"))
    b.add_argument("--points", type=int, default=101)
    b.add_argument("--out")
    b.add_argument("--plot")
    b.add_argument("--quiet", action="store_true")
    c = sub.add_parser("compare", help="pointwise relative error between two columns")
    c.add_argument("input", help="scan CSV")
    c.add_argument("--baseline", required=True)
    c.add_argument("--target", required=True)
    c.add_argument("--target-input", help="take the target column from this CSV instead")
    c.add_argument("--out")
    c.add_argument("--quiet", action="store_true")
    pr = sub.add_parser("presets", help="list presets, or print one as a config file")
    pr.add_argument("--preset")
    pr.add_argument("--out")
    pr.add_argument("--quiet", action="store_true")
    return ap


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(args, msg):
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


def _scan_command(args):
    if bool(args.preset) == bool(args.config):
        raise ConfigError("give exactly one of --preset or --config")
    if args.config:
        cfg = load_config(args.config)
        explicit = True
    else:
        cfg = ScanConfig.from_preset(get_preset(args.preset))
        explicit = False
    qs = cfg.quantities if explicit else quantities_for_group(cfg, args.command)
    cfg = dataclasses.replace(cfg, quantities=tuple(qs))
    if args.n_max is not None:
        if args.n_max < 1:
            raise ConfigError("--n-max must be positive")
        cfg = dataclasses.replace(cfg, n_max=args.n_max)
    _log(args, f"{args.command}: {cfg.name}, {len(cfg.grid)} points, {', '.join(qs)}")
    res = run_scan(cfg)
    _emit(res.to_csv(), args.out)
    if args.plot:
        from .plotting import plot_scan
        plot_scan(res, args.plot)
        _log(args, f"figure written to {args.plot}")
    bad = sum(1 for r in res.rows if r[-1] != "ok")
    if bad:
        _log(args, f"{bad} of {len(res)} points have sentinel cells (see the status column)")
    if res.rows and bad == len(res.rows):
        return 2
    return 0


def _region_command(args):
    if args.points < 0:
        raise ConfigError("--points must be non-negative")
    if args.plane == "nu":
        res = region_scan(np.linspace(*args.re, args.points), np.linspace(*args.im, args.points))
    else:
        if args.C <= 0:
            raise ConfigError("--C must be positive")
        res = region_scan_standard(args.C, np.linspace(*args.delta, args.points),
                                   np.linspace(*args.theta, args.points))
    res.meta["version"] = __version__
    _emit(res.to_csv(), args.out)
    if args.plot:
        from .plotting import plot_region
        plot_region(res, args.plot)
    return 0


def _compare_command(args):
    try:
        res = ScanResult.read_csv(args.input)
        other = ScanResult.read_csv(args.target_input) if args.target_input else None
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    try:
        c = compare(res, args.baseline, args.target, other)
    except MissingColumnError as exc:
        raise ConfigError(str(exc)) from None
    _emit(c.table.to_csv(), args.out)
    _log(args, f"max relative error {c.max_error:.6g}; at antinode {c.antinode_error:.6g}")
    return 0


def _presets_command(args):
    if args.preset:
        p = get_preset(args.preset)
        _emit(config_text(ScanConfig.from_preset(p)), args.out)
        return 0
    lines = ["name,scan,points,gamma,kappa,omega_a,omega_c,N0,description"]
    for p in PRESETS.values():
        q = p.params
        lines.append(f"{p.name},{p.scan_axis},{len(p.grid)},{q.gamma!r},{q.kappa!r},"
                     f"{q.omega_a!r},{q.omega_c!r},{q.N0!r},{p.description}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if not args.command:
        ap.print_help(sys.stderr)
        return 1
    handlers = {"bistab-region": _region_command, "compare": _compare_command,
                "presets": _presets_command}
    try:
        return handlers.get(args.command, _scan_command)(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CavityError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
