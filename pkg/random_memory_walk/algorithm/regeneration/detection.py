"""
This module detects regeneration times from a K-sequence.

Index n >= 1 is a regeneration time when K_{n+i} <= i for every i >= 0,
i.e. no memory segment [j - K_j, j] reaches back past n. Only the
K-sequence is ever looked at, never the positions of the walk.
"""
import logging
import numpy as np
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.serialization.run_summary\
 import RegenerationReport

logger = logging.getLogger(__name__)


def confirmation_window_for(law=None, tolerance=None):
    if law is None:
        return 0
    return law.confirmation_window(tolerance)


def suffix_minima(ks):
    """M_j = min_{j <= l <= N} (l - K_l), one backward pass."""
    ks = np.asarray(ks, dtype=np.int64)
    reach = np.arange(len(ks), dtype=np.int64) - ks
    return np.minimum.accumulate(reach[::-1])[::-1]


def detect_offline(ks, horizon=None, law=None, tolerance=None,
                   confirmation_window=None):
    """
    Arguments
    ---------
    ks : sequence of int
        K_0, ..., K_N.

    Keyword arguments
    -----------------
    horizon : int
        N; defaults to len(ks) - 1.
    law : AbstractMemoryLaw
        Law of the K's, used to size the confirmation window.
    tolerance : float
        Confirmation tolerance; W is the smallest integer with
        tail(W) < tolerance.
    confirmation_window : int
        W given directly, overrides `law`.

    Returns
    -------
    RegenerationReport
        Confirmed indices n in [1, N - W]; indices above N - W are censored.
    """
    if ks is None or len(ks) == 0:
        raise UsageError('Cannot detect regenerations in an empty '
                         'K-sequence')
    if horizon is None:
        horizon = len(ks) - 1
    if len(ks) != horizon + 1:
        raise UsageError('K-sequence has length {}, expected horizon + 1 = '
                         '{}'.format(len(ks), horizon + 1))
    if confirmation_window is None:
        confirmation_window = confirmation_window_for(law, tolerance)
    minima = suffix_minima(ks)
    indices = np.arange(len(ks))
    candidates = indices[(indices >= 1) & (minima >= indices)]
    censored_from = max(horizon - confirmation_window + 1, 1)
    confirmed = candidates[candidates < censored_from]
    return RegenerationReport(confirmed.tolist(), censored_from,
                              horizon=horizon)


def detect_brute_force(ks, horizon=None, confirmation_window=0):
    """Reference checker: scans every i with n + i <= N for each n."""
    if horizon is None:
        horizon = len(ks) - 1
    confirmed = []
    for n in range(1, horizon - confirmation_window + 1):
        if all(ks[n + i] <= i for i in range(horizon - n + 1)):
            confirmed.append(n)
    return confirmed


class OnlineCandidate(object):
    """
    Smallest index not yet refuted as tau_1 while K_1, K_2, ... arrive.

    Once every K has been seen up to a horizon, `candidate` is the first
    regeneration detect_offline reports (when it confirms one).
    """

    def __init__(self):
        self._candidate = 1
        self._time = 0

    def update(self, k_t):
        self._time += 1
        t = self._time
        if t >= self._candidate and k_t > t - self._candidate:
            self._candidate = t + 1
        return self._candidate

    @property
    def candidate(self):
        return self._candidate

    @property
    def time(self):
        return self._time


def online_candidate(ks):
    """
    Candidate sequence for K_1, K_2, ... (K_0 is never read).
    """
    tracker = OnlineCandidate()
    return [tracker.update(k) for k in ks]


class RegenerationTracker(object):
    """
    Streaming form of detect_offline for use during a simulation.

    Keeps a stack of indices not yet refuted, with the walk position at each.
    Index n is refuted by K_j as soon as j - K_j < n, and candidates are
    pushed in increasing order, so refutation only ever pops the top.
    """

    def __init__(self):
        self._indices = []
        self._positions = []

    def observe(self, n, k_n, position):
        """Called with K_n and X_n before the step n -> n + 1."""
        if n >= 1:
            self._indices.append(n)
            self._positions.append(position)
        reach = n - k_n
        while self._indices and self._indices[-1] > reach:
            self._indices.pop()
            self._positions.pop()

    @property
    def candidates(self):
        return list(self._indices)

    @property
    def positions(self):
        return dict(zip(self._indices, self._positions))

    def report(self, horizon, law=None, tolerance=None,
               confirmation_window=None):
        """Confirmed regenerations for K_0..K_horizon."""
        if confirmation_window is None:
            confirmation_window = confirmation_window_for(law, tolerance)
        censored_from = max(horizon - confirmation_window + 1, 1)
        confirmed = [n for n in self._indices if n < censored_from]
        if len(confirmed) < len(self._indices):
            logger.debug('%d regeneration candidates censored above %d',
                         len(self._indices) - len(confirmed), censored_from)
        return RegenerationReport(confirmed, censored_from, horizon=horizon)


def first_regeneration(ks, confirmation_window=0):
    """tau_1 from K_0..K_N, or None when no index is confirmed."""
    report = detect_offline(ks, confirmation_window=confirmation_window)
    if report.regen_indices:
        return report.regen_indices[0]
    return None
