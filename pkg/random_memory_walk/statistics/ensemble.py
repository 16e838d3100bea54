"""
This module folds per-replica run summaries into the pooled ensemble
summary. The fold only reads what a RunSummary persists, so summarizing
freshly simulated runs and summarizing runs reloaded from disk give the
same result.
"""
import logging
import numpy as np
from random_memory_walk.algorithm.exception import AnalysisInputError
from random_memory_walk.algorithm.exception import InsufficientDataError
from random_memory_walk.algorithm.serialization.serialization_mixin\
 import SerializationMixin
from random_memory_walk.statistics.estimators import mean_and_se
from random_memory_walk.statistics.estimators import msd_curve
from random_memory_walk.statistics.estimators import msd_linearity
from random_memory_walk.statistics.theorems import TestResult
from random_memory_walk.statistics.theorems import clt_tests
from random_memory_walk.statistics.theorems import covariance
from random_memory_walk.statistics.theorems import regeneration_tests
from random_memory_walk.statistics.theorems import return_statistics
from random_memory_walk.statistics.theorems import tail_tests
from random_memory_walk.statistics.theorems import transience_tests

logger = logging.getLogger(__name__)


class AnalysisOptions(object):
    """
    Which pooled analyses to run and their thresholds; None thresholds fall
    back to the package defaults.
    """

    def __init__(self, regen=False, clt=False, returns=True, tail=False,
                 return_cutoff=0, clt_step=None, tail_fraction=None,
                 significance=None, standard_errors=None,
                 min_clt_replicas=None, transience_fraction=None):
        self.regen = bool(regen)
        self.clt = bool(clt)
        self.returns = bool(returns)
        self.tail = bool(tail)
        self.return_cutoff = int(return_cutoff)
        self.clt_step = clt_step
        self.tail_fraction = tail_fraction
        self.significance = significance
        self.standard_errors = standard_errors
        self.min_clt_replicas = min_clt_replicas
        self.transience_fraction = transience_fraction

    def to_dict(self):
        return dict(vars(self))


class EnsembleSummary(SerializationMixin):
    """
    Pooled statistics of an ensemble of replicas.

    Keeps the run summaries it was folded from in `runs`; those are not
    part of the serialized form.
    """

    def __init__(self, replicas, dimension, checkpoints, msd, returns,
                 covariance_step=None, covariance_matrix=None, linearity=None,
                 regeneration=None, tests=None, runs=None):
        self.replicas = replicas
        self.dimension = dimension
        self.checkpoints = list(checkpoints)
        self.msd = [tuple(row) for row in msd]
        self.returns = returns
        self.covariance_step = covariance_step
        self.covariance_matrix = covariance_matrix
        self.linearity = linearity
        self.regeneration = regeneration
        self.tests = [TestResult(*row) for row in (tests or [])]
        self.runs = runs

    @property
    def per_axis_variance(self):
        if self.covariance_matrix is None:
            return None
        return [self.covariance_matrix[i][i] for i in range(self.dimension)]

    @property
    def all_passed(self):
        return all(test.passed for test in self.tests)

    def to_dict(self):
        return {
            'replicas': self.replicas,
            'dimension': self.dimension,
            'checkpoints': self.checkpoints,
            'msd': [list(row) for row in self.msd],
            'returns': self.returns,
            'covariance_step': self.covariance_step,
            'covariance': self.covariance_matrix,
            'per_axis_variance': self.per_axis_variance,
            'msd_linearity': self.linearity,
            'regeneration': self.regeneration,
            'tests': [test._asdict() for test in self.tests]
        }

    @classmethod
    def from_dict(cls, values):
        tests = [(row['test'], row['statistic'], row['p_value'],
                  row['threshold'], row['passed'])
                 for row in values.get('tests', [])]
        return cls(values['replicas'], values['dimension'],
                   values['checkpoints'], values['msd'], values['returns'],
                   covariance_step=values.get('covariance_step'),
                   covariance_matrix=values.get('covariance'),
                   linearity=values.get('msd_linearity'),
                   regeneration=values.get('regeneration'), tests=tests)


def _check_consistency(runs):
    dimension = runs[0].dimension
    grid = sorted(runs[0].checkpoints)
    for run in runs:
        if run.dimension != dimension:
            raise InsufficientDataError(
                'Replica {} has dimension {}, expected {}'.format(
                    run.replica, run.dimension, dimension))
        if sorted(run.checkpoints) != grid:
            raise InsufficientDataError(
                'Replica {} was recorded on a different checkpoint grid'
                .format(run.replica))
    return dimension, grid


def summarize(runs, options=None):
    """
    Deterministic fold of run summaries in replica-index order.

    Arguments
    ---------
    runs : iterable of RunSummary
    options : AnalysisOptions

    Returns
    -------
    EnsembleSummary
    """
    options = options or AnalysisOptions()
    runs = sorted(runs, key=lambda run: run.replica)
    if not runs:
        raise InsufficientDataError('Cannot summarize an empty ensemble')
    dimension, grid = _check_consistency(runs)
    msd = msd_curve(runs, grid) if grid else []
    linearity = None
    positive = [row for row in msd if row[0] > 0]
    if len(positive) >= 2:
        linearity = msd_linearity(positive, dimension)
    returns = return_statistics(runs, options.return_cutoff)._asdict()
    tests = []
    covariance_step = None
    covariance_matrix = None
    positive_grid = [n for n in grid if n > 0]
    if positive_grid:
        covariance_step = options.clt_step or positive_grid[-1]
        if covariance_step in grid:
            covariance_matrix = covariance(runs, covariance_step).tolist()
    if options.returns:
        tests.extend(transience_tests(runs, options.return_cutoff,
                                      options.transience_fraction))
    if options.clt:
        step = options.clt_step or (positive_grid[-1] if positive_grid
                                    else None)
        if step is None or step not in grid:
            raise AnalysisInputError(
                'CLT analysis needs positions recorded at a checkpoint step '
                '> 0; add experiment.checkpoints', missing=['checkpoints'])
        tests.extend(clt_tests(runs, step, options.significance,
                               options.standard_errors,
                               options.min_clt_replicas))
    regeneration = None
    if options.regen:
        regeneration = _regeneration_block(runs)
        try:
            tests.extend(regeneration_tests(runs, options.significance,
                                            options.standard_errors))
        except InsufficientDataError as error:
            logger.warning('Regeneration tests skipped: %s', error)
    if options.tail:
        try:
            tests.extend(tail_tests(runs, options.tail_fraction))
        except InsufficientDataError as error:
            logger.warning('Tail index skipped: %s', error)
    return EnsembleSummary(len(runs), dimension, grid, msd, returns,
                           covariance_step=covariance_step,
                           covariance_matrix=covariance_matrix,
                           linearity=linearity, regeneration=regeneration,
                           tests=tests, runs=runs)


def _regeneration_block(runs):
    reports = [run.report for run in runs if run.report is not None]
    if len(reports) < len(runs):
        raise AnalysisInputError(
            'Regeneration analysis needs regeneration reports for every '
            'replica; {} of {} have none'.format(len(runs) - len(reports),
                                                 len(runs)),
            missing=['regens'])
    counts = [len(report.regen_indices) for report in reports]
    times = [t for report in reports for t in report.time_increments]
    block = {'regenerations_mean': float(np.mean(counts)),
             'increments': len(times),
             'subwalk_returns': int(sum(run.subwalk_returns or 0
                                        for run in runs))}
    if times:
        mean, se = mean_and_se(times)
        block.update(increment_mean=mean, increment_se=se)
    return block
