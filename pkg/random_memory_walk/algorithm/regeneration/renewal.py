"""
This module computes renewal quantities of the first regeneration time
tau_1: Monte Carlo samples and pmf estimates, the exact pmf for finite
support laws, and the approximate conditioning on D_0.
"""
import logging
import math
import numpy as np
from random_memory_walk.algorithm.exception import DomainError
from random_memory_walk.algorithm.exception import ResourceLimitError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.configuration import default

logger = logging.getLogger(__name__)

_INITIAL_HORIZON = 64


def _require_finite_mean(law):
    if not law.moment_finite(1):
        raise DomainError('tau_1 is infinite almost surely under {}: the '
                          'law has infinite mean'.format(law))


def _first_confirmed(ks, window):
    """
    First n in [1, H - W] with j - K_j >= n for all j in [n, H], per row of
    ks = K_1..K_H; 0 where none is confirmed.
    """
    rows, horizon = ks.shape
    times = np.arange(1, horizon + 1, dtype=np.int64)
    reach = times[np.newaxis, :] - ks
    minima = np.minimum.accumulate(reach[:, ::-1], axis=1)[:, ::-1]
    passed = (minima >= times[np.newaxis, :]) \
        & (times[np.newaxis, :] <= horizon - window)
    found = passed.any(axis=1)
    return np.where(found, passed.argmax(axis=1) + 1, 0)


def sample_tau1(law, size, generator, tolerance=None, max_horizon=None,
                chunk_cells=None):
    """
    Draws `size` independent copies of tau_1.

    Each K-sequence starts with a short horizon which is doubled, by
    appending fresh K's to the same sequence, until a regeneration is
    confirmed with the confirmation window of `tolerance`. Sequences are
    drawn in chunks of at most `chunk_cells` K's at the starting horizon.

    Arguments
    ---------
    law : AbstractMemoryLaw
    size : int
    generator : numpy.random.Generator

    Returns
    -------
    numpy.ndarray of int64
    """
    _require_finite_mean(law)
    max_horizon = default('tau1_max_horizon', max_horizon)
    chunk_cells = int(default('tau1_chunk_cells', chunk_cells))
    window = law.confirmation_window(tolerance)
    initial = max(_INITIAL_HORIZON, 2 * (window + 1))
    chunk_rows = max(1, chunk_cells // initial)
    logger.debug('Sampling tau_1 under %s in chunks of %d x %d', law,
                 chunk_rows, initial)
    result = np.empty(size, dtype=np.int64)
    for start in range(0, size, chunk_rows):
        rows = min(chunk_rows, size - start)
        horizon = initial
        ks = law.sample_array(generator, (rows, horizon)).astype(np.int64)
        pending = np.arange(rows)
        values = np.zeros(rows, dtype=np.int64)
        while True:
            found = _first_confirmed(ks, window)
            done = found > 0
            values[pending[done]] = found[done]
            pending = pending[~done]
            ks = ks[~done]
            if len(pending) == 0:
                break
            if 2 * horizon > max_horizon:
                raise ResourceLimitError(
                    '{} K-sequences under {} show no confirmed regeneration '
                    'within {} steps'.format(len(pending), law, horizon))
            logger.debug('Extending %d K-sequences from %d to %d steps',
                         len(pending), horizon, 2 * horizon)
            extra = law.sample_array(generator, (len(pending), horizon))
            ks = np.concatenate([ks, extra.astype(np.int64)], axis=1)
            horizon *= 2
        result[start:start + rows] = values
    return result


def tau1_pmf_oracle(law, n, samples=None, seed=0, generator=None):
    """
    Monte Carlo estimate of P[tau_1 = n].

    Returns
    -------
    tuple
        (estimate, standard error)
    """
    _require_finite_mean(law)
    samples = int(default('tau1_samples', samples))
    if generator is None:
        generator = np.random.default_rng(seed)
    taus = sample_tau1(law, samples, generator)
    estimate = float(np.mean(taus == n))
    return estimate, math.sqrt(estimate * (1.0 - estimate) / samples)


def tau1_pmf_exact(law, n_max):
    """
    P[tau_1 = n] for n = 0..n_max, finite support laws only.

    Candidates advance by S_1 + 1 after each refutation, so with
    p = P[tau_1 = 1] and s the conditional pmf of S_1,
    P[tau_1 = n] = p B(n) with B(1) = 1 and
    B(n) = (1 - p) sum_k s(k) B(n - 1 - k).
    """
    support = law.support_max
    if support is None:
        raise DomainError('Exact tau_1 pmf needs a finite support law, got '
                          '{}'.format(law))
    p = law.prob_regen_at_fixed_time()
    pmf = np.zeros(n_max + 1)
    if n_max < 1:
        return pmf
    if p >= 1.0:
        pmf[1] = 1.0
        return pmf
    s = law.s1_conditional_pmf_table(support, regen_probability=p)
    reached = np.zeros(n_max + 1)
    reached[1] = 1.0
    for n in range(2, n_max + 1):
        k = np.arange(min(support, n - 2) + 1)
        reached[n] = (1.0 - p) * np.dot(s[k], reached[n - 1 - k])
    pmf[1:] = p * reached[1:]
    return pmf


def conditioned_regeneration_probability(law, n):
    """
    P[K_i <= i for 0 <= i <= n - 1], which decreases to P[D_0] and is
    never below it.
    """
    if n < 0:
        raise UsageError('n must be >= 0, got {}'.format(n))
    if n == 0:
        return 1.0
    return float(np.prod([law.cdf(i) for i in range(n)]))


class ConditionedStart(object):
    """
    Rejection predicate approximating the conditioning on D_0: accepts a
    K-sequence iff K_i <= i for every i <= depth.

    The accepted event differs from D_0 by at most `error_bound`, the tail
    mass sum_{i > depth} tail(i).
    """

    def __init__(self, law, depth):
        if int(depth) != depth or depth < 0:
            raise UsageError('depth must be an integer >= 0, got {}'
                             .format(depth))
        if not law.prob_regen_at_fixed_time() > 0.0:
            raise DomainError('D_0 has probability 0 under {}'.format(law))
        self._law = law
        self._depth = int(depth)
        self._error_bound = float(law.tail_sum(self._depth))

    @property
    def depth(self):
        return self._depth

    @property
    def error_bound(self):
        return self._error_bound

    @property
    def acceptance_probability(self):
        return conditioned_regeneration_probability(self._law,
                                                    self._depth + 1)

    def __call__(self, ks):
        if len(ks) < self._depth + 1:
            raise UsageError('K-sequence of length {} is shorter than depth '
                             '+ 1 = {}'.format(len(ks), self._depth + 1))
        return bool(np.all(np.asarray(ks[:self._depth + 1])
                           <= np.arange(self._depth + 1)))

    def accepts(self, ks):
        """Row-wise predicate over a 2-D array of K-sequences."""
        ks = np.asarray(ks)
        return np.all(ks[:, :self._depth + 1]
                      <= np.arange(self._depth + 1)[np.newaxis, :], axis=1)


def conditioned_start_approx(law, depth):
    return ConditionedStart(law, depth)
