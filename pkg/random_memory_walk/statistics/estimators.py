"""
Generic estimators over ensembles of run summaries and plain samples.

Every function here is a deterministic function of its input; none of
them draws random numbers.
"""
from collections import namedtuple
import math
import numpy as np
from scipy import stats
from random_memory_walk.algorithm.exception import DomainError
from random_memory_walk.algorithm.exception import InsufficientDataError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.configuration import default

HillEstimate = namedtuple('HillEstimate',
                          ['estimate', 'se', 'k', 'heavy_tail'])

# scipy's exact two-sample distribution is used below this sample size.
_EXACT_KS_SIZE = 30


def mean_and_se(values):
    """Sample mean and its standard error; the SE of a single value is 0."""
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise InsufficientDataError('Cannot average an empty sample')
    if len(values) == 1:
        return float(values[0]), 0.0
    return (float(np.mean(values)),
            float(np.std(values, ddof=1) / math.sqrt(len(values))))


def positions_at(ensemble, n):
    """
    (replicas, d) integer array of X_n over the ensemble.

    Step 0 is always at the origin, recorded or not.
    """
    ensemble = list(ensemble)
    if not ensemble:
        raise InsufficientDataError('Empty ensemble')
    d = ensemble[0].dimension
    if n == 0:
        return np.zeros((len(ensemble), d), dtype=np.int64)
    missing = [run.replica for run in ensemble if n not in run.checkpoints]
    if missing:
        raise InsufficientDataError(
            'Position at step {} not recorded for {} replicas (first: {})'
            .format(n, len(missing), missing[0]))
    return np.array([run.checkpoints[n] for run in ensemble], dtype=np.int64)


def msd_curve(ensemble, checkpoints):
    """
    Mean squared displacement E|X_n|^2 per checkpoint.

    Returns
    -------
    list of tuple
        (n, mean |X_n|^2, standard error) per checkpoint, in order.
    """
    ensemble = list(ensemble)
    if not ensemble:
        raise InsufficientDataError('Cannot compute an MSD curve over an '
                                    'empty ensemble')
    curve = []
    for n in checkpoints:
        squared = np.sum(positions_at(ensemble, n).astype(float) ** 2, axis=1)
        mean, se = mean_and_se(squared)
        curve.append((int(n), mean, se))
    return curve


def msd_linearity(curve, dimension, n_min=None, n_max=None):
    """
    Least-squares line through the MSD curve over [n_min, n_max].

    Returns
    -------
    dict
        slope, intercept, relative_residual (residual norm over MSD norm)
        and diffusion, the per-axis slope / d.
    """
    rows = [(n, m) for n, m, _ in curve
            if (n_min is None or n >= n_min) and (n_max is None or n <= n_max)]
    if len(rows) < 2:
        raise InsufficientDataError('Need at least two checkpoints in range '
                                    'to fit the MSD slope, got {}'
                                    .format(len(rows)))
    n = np.array([row[0] for row in rows], dtype=float)
    msd = np.array([row[1] for row in rows], dtype=float)
    slope, intercept = np.polyfit(n, msd, 1)
    residual = msd - (slope * n + intercept)
    norm = np.linalg.norm(msd)
    return {
        'slope': float(slope),
        'intercept': float(intercept),
        'relative_residual': float(np.linalg.norm(residual) / norm)
        if norm > 0 else 0.0,
        'diffusion': float(slope / dimension)
    }


def ks_two_sample(a, b):
    """
    Two-sample Kolmogorov-Smirnov test.

    Uses the asymptotic distribution, or the exact one when either sample
    has fewer than 30 values.

    Returns
    -------
    tuple
        (statistic, p_value)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise InsufficientDataError('Both samples of a two-sample KS test '
                                    'must be nonempty, got sizes {} and {}'
                                    .format(len(a), len(b)))
    method = 'exact' if min(len(a), len(b)) < _EXACT_KS_SIZE else 'asymp'
    result = stats.ks_2samp(a, b, method=method)
    return float(result.statistic), float(result.pvalue)


def ks_normal(sample):
    """One-sample KS test against the standard normal."""
    result = stats.kstest(np.asarray(sample, dtype=float), 'norm')
    return float(result.statistic), float(result.pvalue)


def hill_tail_index(sample, top_fraction=0.01, heavy_tail_cutoff=None):
    """
    Hill estimator of the tail index over the largest ceil(fraction * n)
    order statistics, with asymptotic standard error estimate / sqrt(k).

    `heavy_tail` is False when the estimate exceeds `heavy_tail_cutoff`,
    i.e. the sample shows no polynomial tail.
    """
    if not 0 < top_fraction <= 0.5:
        raise UsageError('top_fraction must lie in (0, 0.5], got {}'
                         .format(top_fraction))
    cutoff = default('heavy_tail_cutoff', heavy_tail_cutoff)
    values = np.sort(np.asarray(sample, dtype=float))[::-1]
    if len(values) < 2:
        raise InsufficientDataError('Hill estimator needs at least two '
                                    'values')
    if np.any(values <= 0):
        raise UsageError('Hill estimator needs a positive sample')
    if values[0] == values[-1]:
        raise DomainError('Hill estimator is undefined on an all-equal '
                          'sample')
    k = min(int(math.ceil(top_fraction * len(values))), len(values) - 1)
    mean_log_excess = float(np.mean(np.log(values[:k]) - np.log(values[k])))
    if mean_log_excess == 0.0:
        return HillEstimate(math.inf, math.inf, k, False)
    estimate = 1.0 / mean_log_excess
    return HillEstimate(estimate, estimate / math.sqrt(k), k,
                        estimate <= cutoff)
