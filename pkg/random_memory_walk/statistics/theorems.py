"""
This module turns the transience and functional CLT statements, and the
i.i.d. structure of regeneration increments, into statistical checks over
an ensemble of run summaries.

Each check returns TestResult rows carrying the statistic, its p-value
and the threshold used. Window checks report the two-sided normal p-value
of their z-score; one-sided checks report the p-value of the null they
reject when passing.
"""
from collections import namedtuple
import logging
import math
import numpy as np
from scipy.stats import binom
from scipy.stats import norm
from random_memory_walk.algorithm.exception import DomainError
from random_memory_walk.algorithm.exception import InsufficientDataError
from random_memory_walk.configuration import default
from random_memory_walk.statistics.estimators import hill_tail_index
from random_memory_walk.statistics.estimators import ks_normal
from random_memory_walk.statistics.estimators import ks_two_sample
from random_memory_walk.statistics.estimators import mean_and_se
from random_memory_walk.statistics.estimators import positions_at

logger = logging.getLogger(__name__)

TestResult = namedtuple('TestResult', ['test', 'statistic', 'p_value',
                                       'threshold', 'passed'])

ReturnStatistics = namedtuple('ReturnStatistics',
                              ['mean_returns', 'mean_returns_se',
                               'fraction_after_cutoff', 'cutoff',
                               'replicas'])


def _window_test(name, value, se, standard_errors):
    """|value| <= standard_errors * se, reported as a z-score."""
    if se > 0:
        z = value / se
    else:
        z = 0.0 if value == 0 else math.copysign(math.inf, value)
    p_value = float(2 * norm.sf(abs(z))) if math.isfinite(z) else 0.0
    return TestResult(name, float(z), p_value, float(standard_errors),
                      bool(abs(z) <= standard_errors))


def return_statistics(ensemble, cutoff=0):
    """
    Origin returns per replica: pooled mean count and the fraction of
    replicas with a return at a step > cutoff.
    """
    ensemble = list(ensemble)
    if not ensemble:
        return ReturnStatistics(0.0, 0.0, 0.0, cutoff, 0)
    counts = [run.returns for run in ensemble]
    mean, se = mean_and_se(counts)
    late = sum(1 for run in ensemble if run.last_return > cutoff)
    return ReturnStatistics(mean, se, late / float(len(ensemble)), cutoff,
                            len(ensemble))


def transience_tests(ensemble, cutoff, max_fraction=None):
    """
    Fraction of replicas still returning after the cutoff.

    The p-value is P[Binomial(replicas, max_fraction) <= late], small when
    the late-return fraction is credibly below `max_fraction`.
    """
    max_fraction = default('transience_fraction', max_fraction)
    result = return_statistics(ensemble, cutoff)
    late = int(round(result.fraction_after_cutoff * result.replicas))
    p_value = float(binom.cdf(late, result.replicas, max_fraction)) \
        if result.replicas else None
    return [TestResult('returns_after_cutoff', result.fraction_after_cutoff,
                       p_value, float(max_fraction),
                       bool(result.fraction_after_cutoff < max_fraction))]


def clt_tests(ensemble, n, significance=None, standard_errors=None,
              min_replicas=None):
    """
    Checks on X_n / sqrt(n) over the ensemble:

    - coordinatewise KS against the standard normal after dividing by the
      pooled per-axis standard deviation,
    - isotropy: off-diagonal covariances within the SE window of 0 and
      diagonal entries within the SE window of each other,
    - non-degeneracy: pooled standard deviation positive with an SE
      window excluding 0.
    """
    significance = default('significance', significance)
    standard_errors = default('standard_errors', standard_errors)
    min_replicas = default('min_clt_replicas', min_replicas)
    ensemble = list(ensemble)
    if len(ensemble) < min_replicas:
        raise InsufficientDataError(
            'CLT tests need at least {} replicas, got {}'.format(
                min_replicas, len(ensemble)))
    if n <= 0:
        raise InsufficientDataError('CLT tests need a step n > 0')
    scaled = positions_at(ensemble, n).astype(float) / math.sqrt(n)
    replicas, d = scaled.shape
    deviations = scaled - scaled.mean(axis=0)
    squared = deviations ** 2
    variance = float(np.mean(np.var(scaled, axis=0, ddof=1)))
    sigma = math.sqrt(variance)
    variance_se = float(np.std(squared.mean(axis=1), ddof=1)
                        / math.sqrt(replicas))
    results = []
    for axis in range(d):
        name = 'clt_ks_axis{}'.format(axis)
        if sigma > 0:
            statistic, p_value = ks_normal(scaled[:, axis] / sigma)
            results.append(TestResult(name, statistic, p_value,
                                      significance, p_value > significance))
        else:
            results.append(TestResult(name, None, None, significance, False))
    for i in range(d):
        for j in range(i + 1, d):
            products = deviations[:, i] * deviations[:, j]
            value, se = mean_and_se(products)
            results.append(_window_test('clt_cov_{}{}'.format(i, j), value,
                                        se, standard_errors))
    for i in range(d):
        for j in range(i + 1, d):
            value, se = mean_and_se(squared[:, i] - squared[:, j])
            results.append(_window_test('clt_var_{}_vs_{}'.format(i, j),
                                        value, se, standard_errors))
    sigma_se = variance_se / (2 * sigma) if sigma > 0 else 0.0
    if sigma > 0 and sigma_se > 0:
        ratio = sigma / sigma_se
    else:
        ratio = math.inf if sigma > 0 else 0.0
    passed = sigma > 0 and ratio > standard_errors
    if not passed:
        logger.warning('Degenerate CLT ensemble at step %d: pooled standard '
                       'deviation %.3g with standard error %.3g', n, sigma,
                       sigma_se)
    # one-sided against a pooled standard deviation of 0
    p_value = float(norm.sf(ratio)) if math.isfinite(ratio) else 0.0
    results.append(TestResult('clt_nondegenerate', ratio, p_value,
                              float(standard_errors), bool(passed)))
    return results


def covariance(ensemble, n):
    """Empirical covariance matrix of X_n / sqrt(n)."""
    scaled = positions_at(ensemble, n).astype(float) / math.sqrt(max(n, 1))
    if len(scaled) < 2:
        return np.zeros((scaled.shape[1], scaled.shape[1]))
    return np.atleast_2d(np.cov(scaled, rowvar=False))


def regeneration_increments(ensemble):
    """
    First and second halves of each replica's time increments
    tau_{k+1} - tau_k (k >= 1), pooled, and the pooled space increments.
    """
    first, second, space = [], [], []
    for run in ensemble:
        report = run.report
        if report is None:
            continue
        times = report.time_increments
        half = len(times) // 2
        first.extend(times[:half])
        second.extend(times[half:2 * half])
        space.extend(report.space_increments)
    return first, second, space


def regeneration_tests(ensemble, significance=None, standard_errors=None):
    """
    Half-split KS test on time increments and zero-mean windows on each
    coordinate of the sub-walk increments.
    """
    significance = default('significance', significance)
    standard_errors = default('standard_errors', standard_errors)
    ensemble = list(ensemble)
    first, second, space = regeneration_increments(ensemble)
    if not first or not second:
        raise InsufficientDataError(
            'Regeneration tests need increments in both halves; got {} and '
            '{}'.format(len(first), len(second)))
    statistic, p_value = ks_two_sample(first, second)
    results = [TestResult('regen_dt_halves_ks', statistic, p_value,
                          significance, p_value > significance)]
    space = np.array([row for row in space if row], dtype=float)
    if space.size:
        for axis in range(space.shape[1]):
            value, se = mean_and_se(space[:, axis])
            results.append(_window_test('regen_dy_mean_axis{}'.format(axis),
                                        value, se, standard_errors))
    return results


def tail_tests(ensemble, top_fraction=None, heavy_tail_cutoff=None):
    """Hill tail index of the pooled regeneration time increments."""
    top_fraction = default('tail_fraction', top_fraction)
    cutoff = default('heavy_tail_cutoff', heavy_tail_cutoff)
    times = [t for run in ensemble if run.report is not None
             for t in run.report.time_increments]
    if len(times) < 2:
        raise InsufficientDataError('Tail index needs at least two '
                                    'regeneration increments')
    try:
        estimate = hill_tail_index(times, top_fraction=top_fraction,
                                   heavy_tail_cutoff=cutoff)
    except DomainError:
        logger.info('All regeneration increments are equal; no tail')
        return [TestResult('tail_index_hill', math.inf, 1.0,
                           float(cutoff), False)]
    # one-sided against a tail index at or above the cutoff
    if estimate.se > 0 and math.isfinite(estimate.estimate):
        p_value = float(norm.cdf((estimate.estimate - cutoff) / estimate.se))
    else:
        p_value = 1.0
    return [TestResult('tail_index_hill', estimate.estimate, p_value,
                       float(cutoff), bool(estimate.heavy_tail))]
