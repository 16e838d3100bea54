"""
Command line entry point:

    random_memory_walk run <config> [--workers N] [--seed S] [--format F]
    random_memory_walk exact --family F --params k=v ... [--k-max K]
    random_memory_walk analyze <dir>
    random_memory_walk sweep <grid> [--workers N]

Errors raised on purpose by the package are printed to stderr and give
exit status 1.
"""
import argparse
import logging
import sys
import numpy as np
import pandas as pd
from random_memory_walk.algorithm.exception import RandomMemoryWalkError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.memory_law import memory_law
from random_memory_walk.algorithm.regeneration.renewal import tau1_pmf_exact
from random_memory_walk.algorithm.regeneration.renewal import tau1_pmf_oracle
from random_memory_walk.configuration import default
from random_memory_walk.experiment.config_loading import FORMATS
from random_memory_walk.experiment.config_loading import load_experiment
from random_memory_walk.experiment.runner import analyze_directory
from random_memory_walk.experiment.runner import run_experiment
from random_memory_walk.experiment.sweep import failed_cells
from random_memory_walk.experiment.sweep import load_sweep
from random_memory_walk.experiment.sweep import run_sweep

logger = logging.getLogger(__name__)


def parse_params(pairs):
    """['p=0.5', 'k=3'] -> {'p': 0.5, 'k': 3}."""
    params = {}
    for pair in pairs or []:
        key, separator, text = pair.partition('=')
        if not separator or not key:
            raise UsageError('parameter {!r} is not of the form key=value'
                             .format(pair))
        try:
            value = int(text)
        except ValueError:
            try:
                value = float(text)
            except ValueError:
                raise UsageError('parameter {} has a non-numeric value {!r}'
                                 .format(key, text))
        params[key] = value
    return params


def cmd_run(args):
    experiment = load_experiment(args.config).with_overrides(
        seed=args.seed, output_format=args.format, workers=args.workers,
        output=args.output)
    summary = run_experiment(experiment, verbose=args.verbose)
    print('{} replicas written to {}; {} of {} tests passed'.format(
        summary.replicas, experiment.output,
        sum(test.passed for test in summary.tests), len(summary.tests)))
    return 0


def exact_table(law, k_max, truncation_mass=None, product_error=None):
    """
    Lines printed by `exact`: P[tau_1 = 1], finiteness of the first
    moments and the conditional pmf of S_1 with its cumulative mass.
    """
    lines = ['memory law: {}'.format(law)]
    for m in range(1, 5):
        lines.append('E[K^{}] finite: {}'.format(m, law.moment_finite(m)))
    if not law.moment_finite(1):
        lines.append('P[tau_1<inf]=0 regime: E[K] is infinite, so '
                     'P[tau_1 = 1] = 0 and no regeneration ever occurs')
        return lines
    p = law.prob_regen_at_fixed_time(truncation_mass=truncation_mass,
                                     product_error=product_error)
    lines.append('P[tau_1 = 1] = {:.10f}'.format(p))
    if 0.0 < p < 1.0:
        pmf = law.s1_conditional_pmf_table(k_max, regen_probability=p)
        c0, c1 = law.s1_bounds(regen_probability=p)
        frame = pd.DataFrame({'k': np.arange(k_max + 1),
                              's1_pmf': pmf,
                              'cumulative': np.cumsum(pmf)})
        lines.append('P[S_1 = k | S_1 < inf], bounds c0 = {:.6g}, '
                     'c1 = {:.6g}:'.format(c0, c1))
        lines.append(frame.to_string(index=False))
    elif p >= 1.0:
        lines.append('S_1 is infinite almost surely: every time regenerates')
    else:
        lines.append('P[tau_1 = 1] = 0: conditioning on S_1 < inf is '
                     'degenerate')
    if law.support_max is not None and p > 0.0:
        exact = tau1_pmf_exact(law, k_max)
        frame = pd.DataFrame({'n': np.arange(1, k_max + 1),
                              'tau1_pmf': exact[1:]})
        lines.append('P[tau_1 = n]:')
        lines.append(frame.to_string(index=False))
    return lines


def cmd_exact(args):
    law = memory_law(args.family, **parse_params(args.params))
    for line in exact_table(law, args.k_max, args.truncation_mass,
                            args.product_error):
        print(line)
    if args.samples and law.moment_finite(1):
        estimate, se = tau1_pmf_oracle(law, 1, samples=args.samples,
                                       seed=args.seed or 0)
        print('Monte Carlo P[tau_1 = 1] = {:.6f} +/- {:.6f} ({} samples)'
              .format(estimate, se, args.samples))
    return 0


def cmd_analyze(args):
    summary = analyze_directory(args.directory)
    print('analysis of {} replicas written to {}/analysis; {} of {} tests '
          'passed'.format(summary.replicas, args.directory,
                          sum(test.passed for test in summary.tests),
                          len(summary.tests)))
    return 0


def cmd_sweep(args):
    sweep = load_sweep(args.grid)
    if args.output is not None:
        sweep.output = args.output
    manifest = run_sweep(sweep, workers=args.workers, verbose=args.verbose)
    failed = failed_cells(manifest)
    if failed:
        print('{} of {} cells failed: {}'.format(
            len(failed), len(manifest['cells']), ', '.join(failed)),
            file=sys.stderr)
        return 1
    print('{} cells completed in {}'.format(len(manifest['cells']),
                                            sweep.output))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog='random_memory_walk',
        description='Simulate random memory walks and check their '
                    'regeneration structure, transience and CLT.')
    parser.add_argument('--verbose', action='store_true',
                        help='progress bars and debug logging')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    run = commands.add_parser('run', help='simulate an ensemble')
    run.add_argument('config', help='TOML experiment file')
    run.add_argument('--workers', type=int, default=None)
    run.add_argument('--seed', type=int, default=None,
                     help='master seed, overrides experiment.master_seed')
    run.add_argument('--format', choices=FORMATS, default=None)
    run.add_argument('--output', default=None,
                     help='output directory, overrides experiment.output')
    run.set_defaults(handler=cmd_run)

    exact = commands.add_parser('exact',
                                help='exact renewal quantities of a law')
    exact.add_argument('--family', required=True)
    exact.add_argument('--params', nargs='*', default=[],
                       metavar='KEY=VALUE')
    exact.add_argument('--k-max', type=int, default=default('s1_k_max'))
    exact.add_argument('--truncation-mass', type=float, default=None)
    exact.add_argument('--product-error', type=float, default=None)
    exact.add_argument('--samples', type=int, default=0,
                       help='also estimate P[tau_1 = 1] by Monte Carlo')
    exact.add_argument('--seed', type=int, default=None)
    exact.set_defaults(handler=cmd_exact)

    analyze = commands.add_parser('analyze',
                                  help='pooled statistics of a run directory')
    analyze.add_argument('directory')
    analyze.set_defaults(handler=cmd_analyze)

    sweep = commands.add_parser('sweep', help='run a parameter grid')
    sweep.add_argument('grid', help='TOML sweep file')
    sweep.add_argument('--workers', type=int, default=None)
    sweep.add_argument('--output', default=None)
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose
                        else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.handler(args)
    except RandomMemoryWalkError as error:
        print('error: {}'.format(error), file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
