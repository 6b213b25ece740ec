"""Command line interface

Usage::

    nash-sandbox preflight --config capacity
    nash-sandbox run --config portfolio --trajectories 50 --seed 7
    nash-sandbox bounds --config portfolio_async --out results
    nash-sandbox fit --in results/metrics.csv
    nash-sandbox compare --config portfolio --out compare

``--config`` takes a YAML file or the name of a shipped configuration.
Results are printed to stdout as JSON. The exit code is 0 on success,
1 for usage and configuration errors, 2 when the contraction preflight
fails and 3 for any other runtime error.
"""

# License: BSD (3-clause)

import argparse
import json
import sys

from mne.utils import logger, set_log_level

from ..utils import PreflightError
from .config import ExperimentConfig, shipped_configs
from .experiment import (run_preflight, run_experiment, run_bounds,
                         compare_with_sg, fit_metrics_file)

EXIT_OK, EXIT_USAGE, EXIT_PREFLIGHT, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    """Bad command line or configuration"""


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError('%s: %s' % (self.prog, message))


def _build_parser():
    parser = _Parser(prog='nash-sandbox',
                     description='Inexact proximal best-response schemes '
                                 'for stochastic Nash games')
    level = parser.add_mutually_exclusive_group()
    level.add_argument('--verbose', action='store_true',
                       help='log progress at INFO level')
    level.add_argument('--quiet', action='store_true',
                       help='only log warnings')
    subparsers = parser.add_subparsers(dest='command', metavar='command',
                                       parser_class=_Parser)
    helps = dict(preflight='check the contraction condition',
                 run='run an experiment and write its artifacts',
                 bounds='evaluate the theoretical bounds',
                 compare='compare with the stochastic gradient baseline')
    for name in ('preflight', 'run', 'bounds', 'compare'):
        sub = subparsers.add_parser(name, help=helps[name])
        sub.add_argument('--config', required=True,
                         help='YAML file or one of %s'
                              % ', '.join(shipped_configs()))
        sub.add_argument('--out', default=None, help='output directory')
        sub.add_argument('--force', action='store_true',
                         help='run even if the preflight fails')
        if name in ('run', 'compare', 'bounds'):
            sub.add_argument('--seed', type=int, default=None,
                             help='master seed')
            sub.add_argument('--trajectories', type=int, default=None,
                             help='number of trajectories')
    fit = subparsers.add_parser('fit', help='fit K(eps) ~ c / eps^2')
    fit.add_argument('--in', dest='fname', required=True,
                     help='a metrics.csv written by run')
    fit.add_argument('--target', type=float, default=None,
                     help='smallest accuracy of the grid')
    fit.add_argument('--n-eps', type=int, default=None,
                     help='size of the accuracy grid')
    fit.add_argument('--intercept', action='store_true',
                     help='fit a constant as well')
    return parser


def _load_config(args):
    try:
        cfg = ExperimentConfig.from_yaml(args.config)
        scheme = dict()
        if getattr(args, 'seed', None) is not None:
            scheme['seed'] = args.seed
        if getattr(args, 'trajectories', None) is not None:
            scheme['n_trajectories'] = args.trajectories
        sections = dict(scheme=scheme) if scheme else dict()
        if args.out is not None:
            sections['out'] = args.out
        if args.force:
            sections['experiment'] = dict(force=True)
        return cfg.copy(**sections) if sections else cfg
    except (ValueError, TypeError) as err:
        raise UsageError('invalid configuration %s: %s' % (args.config, err))


def _run(args):
    if args.command == 'fit':
        return fit_metrics_file(args.fname, args.target, args.n_eps,
                                args.intercept)
    cfg = _load_config(args)
    if args.command == 'preflight':
        return run_preflight(cfg, out=args.out)
    if args.command == 'run':
        return run_experiment(cfg)
    if args.command == 'bounds':
        return run_bounds(cfg, out=args.out)
    return compare_with_sg(cfg, out=args.out)


def cli_main(argv=None):
    """Run the command line interface

    Parameters
    ----------
    argv : list of str | None
        Arguments without the program name, ``sys.argv[1:]`` if None.

    Returns
    -------
    code : int
        The exit code.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError('a command is required, see --help')
    except UsageError as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write('%s\n' % err)
        return EXIT_USAGE
    except SystemExit as err:
        # --help
        return EXIT_OK if not err.code else EXIT_USAGE
    if args.verbose:
        set_log_level('INFO')
    elif args.quiet:
        set_log_level('WARNING')
    try:
        result = _run(args)
    except UsageError as err:
        sys.stderr.write('%s\n' % err)
        return EXIT_USAGE
    except PreflightError as err:
        sys.stderr.write('preflight failed: %s\n' % err)
        if err.report is not None:
            sys.stdout.write(json.dumps(err.report.to_dict(), sort_keys=True,
                                        indent=2) + '\n')
        return EXIT_PREFLIGHT
    except Exception as err:
        logger.error('%s failed: %s: %s' % (args.command,
                                            type(err).__name__, err))
        return EXIT_RUNTIME
    sys.stdout.write(json.dumps(result, sort_keys=True, indent=2) + '\n')
    return EXIT_OK


def main():
    """Console script entry point"""
    sys.exit(cli_main())
