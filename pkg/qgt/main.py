import os
import sys
import logging
import argparse
import functools

from qgt import conf, __version__
from qgt.campaign import (CampaignConfig, ConfigError, OUTPUT_FORMATS,
                          ReplayError, replay, run_campaign, seeded_pair,
                          suite_choices, sweep_gap)
from qgt.result import (SWEEP_COLUMNS, render_selftest, render_summary,
                        write_csv, write_failures, write_report)
from qgt.selftest import all_passed, run_selftest
from qgt.utils import parse_floats, parse_ints

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def subparser(func):
    @functools.wraps(func)
    def wrapper(parser):
        splitted = func.__doc__.split('\n')
        name = func.__name__.split('_')[0]
        subpar = parser.add_parser(
            name, help=splitted[0], description='\n'.join(splitted[1:]),
            formatter_class=argparse.RawDescriptionHelpFormatter)
        return func(subpar)
    return wrapper


def _float_pair(text):
    values = parse_floats(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError('expected "low,high", got %r' % text)
    return values


def _float_list(text):
    try:
        return parse_floats(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected "q1,q2,...", got %r' % text)


def _int_list(text):
    try:
        return parse_ints(text)
    except ValueError:
        raise argparse.ArgumentTypeError('expected "n1,n2,...", got %r' % text)


def _open_output(path):
    if path is None or path == '-':
        return sys.stdout, False
    return open(path, 'w', newline='', encoding='utf8'), True


@subparser
def verify_parser(parser):
    """run an inequality suite over a seeded random ensemble
    Examples:
        $ qgt verify theorem1 --q-grid 1,1.5,2,2.5,3 --dim 1,3,8 --trials 1000
        $ qgt verify all --config etc/campaign.yml --format csv --out all.csv
    """
    parser.add_argument('suite', choices=suite_choices(),
                        help='suite to run, "all" for every suite')
    grid = parser.add_mutually_exclusive_group()
    grid.add_argument('--q', type=float, help='a single deformation parameter')
    grid.add_argument('--q-grid', type=_float_list,
                      help='comma separated q values in [1, 3]')
    parser.add_argument('--dim', type=_int_list,
                        help='comma separated matrix dimensions')
    parser.add_argument('--trials', type=int, help='trials per (q, dim) cell')
    parser.add_argument('--seed', type=int, help='campaign seed')
    parser.add_argument('--eig-range', type=_float_pair,
                        help='eigenvalue range "low,high" of random matrices')
    parser.add_argument('--tol-scale', type=float,
                        help='slack is tol-scale * max(1, |lhs|, |rhs|)')
    parser.add_argument('--format', choices=OUTPUT_FORMATS,
                        help='report format, json by default')
    parser.add_argument('--out', help='report file, stdout by default')
    parser.add_argument('--config', help='YAML campaign file')
    parser.add_argument('--failures-dir',
                        help='write one replay file per failed trial here')
    workers = parser.add_mutually_exclusive_group()
    workers.add_argument('--threads', type=int,
                         help='parallel worker processes [QGT_THREADS]')
    workers.add_argument('--serial', action='store_true',
                         help='run trials in this process, for debugging')

    def handler(args):
        overrides = {
            'suite': args.suite,
            'q_grid': (args.q,) if args.q is not None else args.q_grid,
            'dims': args.dim,
            'trials_per_cell': args.trials,
            'seed': args.seed,
            'eigenvalue_range': args.eig_range,
            'tolerance_scale': args.tol_scale,
            'output_format': args.format,
        }
        if args.config:
            config = CampaignConfig.load(args.config, **overrides)
        else:
            config = CampaignConfig(
                **dict((k, v) for k, v in overrides.items() if v is not None))

        workers = 1 if args.serial else args.threads
        report = run_campaign(config, workers)

        stream, close = _open_output(args.out)
        try:
            write_report(report, stream, config.output_format)
        finally:
            if close:
                stream.close()
        if args.failures_dir and report.failures:
            write_failures(report, args.failures_dir)
        sys.stderr.write(render_summary(report))
        return EXIT_PASS if report.passed else EXIT_FAIL

    parser.set_defaults(handler=handler)
    return parser


@subparser
def sweep_parser(parser):
    """tabulate both sides of the deformed Golden-Thompson bound along q
    Examples:
        $ qgt sweep --dim 3 --seed 7 --q-grid 1,1.25,1.5,1.75,2,2.25,2.5,3
        $ qgt sweep --dim 1 --eig-range 1,1 --q-grid 1.5,2.5
        $ qgt sweep --dim 2 --seed 7 --b-seed 8 --q-grid 1.5,2.5
    """
    parser.add_argument('--q-grid', type=_float_list, required=True,
                        help='comma separated q values in [1, 3]')
    parser.add_argument('--dim', type=int, default=2, help='matrix dimension')
    parser.add_argument('--seed', type=int, help='seed of the (A, B) pair')
    parser.add_argument('--a-seed', type=int,
                        help='take A from this seed, B from --seed')
    parser.add_argument('--b-seed', type=int,
                        help='take B from this seed, A from --seed')
    parser.add_argument('--eig-range', type=_float_pair,
                        help='eigenvalue range "low,high" of A and B')
    parser.add_argument('--out', help='CSV file, stdout by default')

    def handler(args):
        config = CampaignConfig(suite='theorem1', q_grid=args.q_grid,
                                dims=(args.dim,), seed=args.seed,
                                eigenvalue_range=args.eig_range)
        a, b = seeded_pair(args.dim, config.seed, config.eigenvalue_range,
                           args.a_seed, args.b_seed)
        rows = sweep_gap(a, b, config.q_grid)
        stream, close = _open_output(args.out)
        try:
            write_csv(rows, stream, SWEEP_COLUMNS)
        finally:
            if close:
                stream.close()
        return EXIT_PASS

    parser.set_defaults(handler=handler)
    return parser


@subparser
def replay_parser(parser):
    """re-evaluate a recorded failure, or every failure of a JSON report
    Examples:
        $ qgt replay failures/theorem1-q1.5-dim3-trial17.json
        $ qgt replay report.json
    """
    parser.add_argument('path', help='failure file or JSON report')

    def handler(args):
        outcomes = replay(args.path)
        for outcome in outcomes:
            record = outcome.record
            if outcome.error:
                detail = outcome.error
            else:
                detail = 'lhs %r rhs %r gap %r %s' % (
                    outcome.verdict.lhs, outcome.verdict.rhs,
                    outcome.verdict.gap,
                    'holds' if outcome.verdict.holds else 'violated')
            if outcome.exact:
                status = 'reproduced'
            elif outcome.matches:
                status = 'reproduced (drift %.1e)' % max(outcome.lhs_drift,
                                                         outcome.rhs_drift)
            else:
                status = 'MISMATCH'
            print('%s q=%g dim=%d trial=%d: %s, %s'
                  % (record['suite'], record['q'], record['dim'],
                     record['trial_index'], detail, status))
        if all(outcome.matches for outcome in outcomes):
            return EXIT_PASS
        return EXIT_FAIL

    parser.set_defaults(handler=handler)
    return parser


@subparser
def selftest_parser(parser):
    """cross-check derivatives, the scalar oracle and the decoupling limit
    Examples:
        $ qgt selftest --trials 50
    """
    parser.add_argument('--seed', type=int, help='seed of the checks')
    parser.add_argument('--trials', type=int, help='trials per check')

    def handler(args):
        results = run_selftest(args.seed, args.trials)
        sys.stdout.write(render_selftest(results))
        return EXIT_PASS if all_passed(results) else EXIT_FAIL

    parser.set_defaults(handler=handler)
    return parser


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog='qgt',
        description='Deformed exponential matrix calculus and randomized '
                    'checks of the deformed Golden-Thompson inequality',
        epilog='Try qgt <subcommand> --help for help on specific subcommand')
    parser.add_argument('-V', '--version',
                        action='version', version=__version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='verbose output, -vv for debug')
    parser.add_argument('-q', '--quiet', action='store_true',
                        help='errors only')
    parser.add_argument('--settings',
                        default=os.environ.get(conf.ENVIRONMENT_VARIABLE),
                        help='settings.py overriding the defaults [%s]'
                        % conf.ENVIRONMENT_VARIABLE)
    subparsers = parser.add_subparsers(title='subcommands', dest='subcommand')
    subparsers.required = True
    for name, obj in list(globals().items()):
        if name.endswith('_parser') and callable(obj):
            obj(subparsers)
    args = parser.parse_args(argv)

    if args.quiet:
        level = logging.ERROR
    elif args.verbose > 1:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level)
    logging.getLogger().setLevel(level)

    try:
        conf.load_settings(args.settings)
        return args.handler(args)
    except (ConfigError, ReplayError, ImportError, IOError, OSError) as err:
        print('qgt: error: %s' % err, file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
