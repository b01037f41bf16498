"""Steady Ricci soliton shooting toolkit.

Usage:
  Main.py shoot --n=<n> --alpha=<alpha> --beta=<beta> [--gamma=<gamma>] [options]
  Main.py find-critical --n=<n> [--gamma=<gamma>] [--tol=<tol>] [options]
  Main.py sweep --gammas=<list> [--n=<n>] [--tol=<tol>] [--mode=<mode>] [options]
  Main.py validate [options]
  Main.py center-poly [--degree=<degree>] [options]
  Main.py (-h | --help)
  Main.py --version

Options:
  --n=<n>              Order of the principal isotropy group.
  --alpha=<alpha>      Shooting parameter alpha.
  --beta=<beta>        Shooting parameter beta.
  --gamma=<gamma>      Shooting parameter gamma, nonzero only for n = 4 [default: 0].
  --gammas=<list>      Comma-separated gamma slices of a sweep.
  --lambda=<lambda>    Einstein constant [default: 0].
  --tol=<tol>          Bracket width of a critical search.
  --mode=<mode>        Sweep mode: sequential, thread or process.
  --degree=<degree>    Truncation degree of the center-manifold polynomial.
  --rtol=<rtol>        Relative tolerance of the integrator.
  --atol=<atol>        Absolute tolerance of the integrator.
  --horizon=<horizon>  Horizon in the compactified time s.
  --epsilon=<epsilon>  Launch radius of the series startup.
  --config=<path>      YAML file merged over the built-in defaults.
  --out=<dir>          Output directory.
  -h --help            Show this screen.
  --version            Show version.
"""
import sys

from docopt import docopt

from evaluation.RunManifest import VERSION
from evaluation.commands import EXIT_BAD_INPUT, run
from evaluation.config import effective_config
from dynamics.exceptions import DomainError

FLAGS = {
    "--rtol": ("integrator", "rtol", float),
    "--atol": ("integrator", "atol", float),
    "--horizon": ("search", "horizon", float),
    "--epsilon": ("startup", "epsilon", float),
    "--tol": ("search", "tol", float),
    "--mode": ("search", "mode", str),
    "--degree": ("center_manifold", "degree", int),
    "--out": ("output", "directory", str),
}


def _number(flag, value, kind):
    try:
        return kind(value)
    except ValueError:
        raise DomainError(f"'{flag}' expects a {kind.__name__}, got '{value}'.")


def flag_overrides(args):
    overrides = {}
    for flag, (section, key, kind) in FLAGS.items():
        if args.get(flag) is not None:
            overrides.setdefault(section, {})[key] = _number(flag, args[flag], kind)
    return overrides


def command_arguments(args):
    lam = _number("--lambda", args["--lambda"], float)
    if args["shoot"]:
        return "shoot", {"n": _number("--n", args["--n"], int), "alpha": _number("--alpha", args["--alpha"], float),
                         "beta": _number("--beta", args["--beta"], float),
                         "gamma": _number("--gamma", args["--gamma"], float), "lam": lam}
    if args["find-critical"]:
        return "find-critical", {"n": _number("--n", args["--n"], int),
                                 "gamma": _number("--gamma", args["--gamma"], float), "lam": lam}
    if args["sweep"]:
        n = 4 if args["--n"] is None else _number("--n", args["--n"], int)
        gammas = [_number("--gammas", g, float) for g in args["--gammas"].split(",") if g.strip()]
        return "sweep", {"n": n, "gammas": gammas}
    if args["validate"]:
        return "validate", {}
    return "center-poly", {}


def main(argv=None):
    args = docopt(__doc__, argv=argv, version=VERSION)
    try:
        config = effective_config(args["--config"], flag_overrides(args))
        command, kwargs = command_arguments(args)
    except DomainError as error:
        print(f"Bad input: {error}", file=sys.stderr)
        return EXIT_BAD_INPUT
    return run(command, config, **kwargs)


if __name__ == "__main__":
    sys.exit(main())
