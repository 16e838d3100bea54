"""
This module steps a block of replicas of the random memory walk together,
one numpy operation per step for the whole block.

Every replica keeps its own PCG64 generator, seeded and read exactly like
the UniformStream of MemoryWalkEngine (K_n first, then the neighbor), so a
replica's trajectory does not depend on the block it is stepped in. The
edge memory is the int8 log of step directions: R_{n,K_n} is rebuilt from
the last K_n directions relative to the current site.
"""
import logging
import numpy as np
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import ResourceLimitError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.regeneration.detection\
 import confirmation_window_for
from random_memory_walk.algorithm.regeneration.detection import detect_offline
from random_memory_walk.algorithm.regeneration.subwalk import attach_subwalk
from random_memory_walk.algorithm.serialization.run_summary\
 import RegenerationReport
from random_memory_walk.algorithm.serialization.run_summary import RunSummary
from random_memory_walk.configuration import default
from random_memory_walk.utilities.progress import ProgressReporter
from random_memory_walk.utilities.random_stream import pcg64_generator

logger = logging.getLogger(__name__)

# Windows up to this many steps are scanned for the whole block at once;
# longer ones row by row.
_SHARED_LAGS = 64


def unit_steps(dimension):
    """(2d, d) moves in neighbor order: -e_0, +e_0, -e_1, +e_1, ..."""
    units = np.zeros((2 * dimension, dimension), dtype=np.int64)
    for axis in range(dimension):
        units[2 * axis, axis] = -1
        units[2 * axis + 1, axis] = 1
    return units


def reinforced_neighbors(recent, valid, units):
    """
    Arguments
    ---------
    recent : numpy.ndarray
        (rows, L) neighbor codes of steps n, n - 1, ..., n - L + 1.
    valid : numpy.ndarray
        (rows, L) bool, True where the lag lies in the memory window.
    units : numpy.ndarray
        unit_steps(d).

    Returns
    -------
    numpy.ndarray
        (rows, 2d) bool, True where the edge from X_n to that neighbor was
        crossed at a valid lag.
    """
    steps = units[recent]
    # X_n - X_{n-j-1} and X_n - X_{n-j} at lag j
    before = np.cumsum(steps, axis=1)
    after = before - steps
    left = ~before.any(axis=2) & valid
    entered = ~after.any(axis=2) & valid
    lanes = np.arange(units.shape[0])
    hits = (recent[:, :, np.newaxis] == lanes) & left[:, :, np.newaxis]
    hits |= ((recent ^ 1)[:, :, np.newaxis] == lanes) \
        & entered[:, :, np.newaxis]
    return hits.any(axis=1)


def range_sizes(paths, codes, horizon):
    """
    Number of distinct edges crossed, per row.

    Arguments
    ---------
    paths : numpy.ndarray
        (rows, H + 1, d) positions X_0..X_H.
    codes : numpy.ndarray
        (rows, H) neighbor codes of the steps.
    """
    rows, _, dimension = paths.shape
    if horizon == 0:
        return np.zeros(rows, dtype=np.int64)
    forward = (codes % 2 == 1)[:, :, np.newaxis]
    base = np.where(forward, paths[:, :-1], paths[:, 1:]) + horizon
    axes = (codes // 2).astype(np.int64)
    radix = 2 * horizon + 1
    if dimension * radix ** dimension < 2**62:
        keys = axes
        for axis in range(dimension):
            keys = keys * radix + base[:, :, axis]
        keys = np.sort(keys, axis=1)
        return 1 + np.count_nonzero(np.diff(keys, axis=1), axis=1)
    return np.array([len(np.unique(np.column_stack([base[row], axes[row]]),
                                   axis=0)) for row in range(rows)])


class BatchedMemoryWalk(object):
    """
    Runs blocks of memory walk replicas in lockstep.

    Arguments
    ---------
    config : WalkConfig
        memory_walk engine, no ellipticity split. `seed` and `keep_log`
        are ignored: every replica gets its own seed in `run`.
    """

    def __init__(self, config):
        if config.engine != 'memory_walk' or config.ellipticity_split:
            raise ConfigurationError('batched runs need the memory_walk '
                                     'engine without the ellipticity split',
                                     field='walk.batched')
        self._config = config
        self._law = config.memory
        self._dimension = config.dimension
        self._sides = 2 * config.dimension
        self._boost = 1.0 + config.delta
        self._units = unit_steps(config.dimension)

    @property
    def config(self):
        return self._config

    def block_size(self, cells=None):
        """Replicas per block so that the step logs fit `cells` bytes."""
        cells = int(default('batch_cells', cells))
        per_replica = max(self._config.horizon, 1) \
            * (9 if self._config.regen else 1)
        return max(1, cells // per_replica)

    def run(self, seeds, replicas=None, verbose=False):
        """
        Arguments
        ---------
        seeds : sequence of int
            Stream seed of each replica.

        Keyword arguments
        -----------------
        replicas : sequence of int
            Replica indices for the summaries, 0, 1, ... by default.
        verbose : bool
            Progress over steps on stderr.

        Returns
        -------
        list of RunSummary, in the order of `seeds`
        """
        self._config.check_resources()
        seeds = list(seeds)
        replicas = list(range(len(seeds))) if replicas is None \
            else list(replicas)
        if len(replicas) != len(seeds):
            raise UsageError('{} replica indices for {} seeds'.format(
                len(replicas), len(seeds)))
        if not seeds:
            return []
        codes, ks = self._simulate(seeds, verbose)
        return self._summarize(codes, ks, replicas)

    def _simulate(self, seeds, verbose):
        horizon = self._config.horizon
        rows = len(seeds)
        generators = [pcg64_generator(seed) for seed in seeds]
        try:
            codes = np.zeros((rows, horizon), dtype=np.int8)
            ks = np.zeros((rows, horizon), dtype=np.int64) \
                if self._config.regen else None
        except MemoryError:
            raise ResourceLimitError('Cannot allocate step logs for {} '
                                     'replicas of {} steps'.format(rows,
                                                                   horizon))
        chunk = max(1, int(default('batch_uniforms')) // (2 * rows))
        logger.debug('Stepping %d replicas, %d steps per draw', rows, chunk)
        reporter = ProgressReporter(horizon, label='steps') \
            if verbose else None
        last = self._sides - 1
        for start in range(0, horizon, chunk):
            steps = min(chunk, horizon - start)
            u = np.stack([generator.random(2 * steps)
                          for generator in generators]).reshape(rows, steps,
                                                                2)
            k_block = self._law.from_uniforms(u[:, :, 0])
            if ks is not None:
                ks[:, start:start + steps] = k_block
            for j in range(steps):
                n = start + j
                weights = self._weights(codes, n, k_block[:, j])
                cumulative = np.cumsum(weights, axis=1)
                threshold = u[:, j, 1] * cumulative[:, -1]
                chosen = np.count_nonzero(
                    cumulative <= threshold[:, np.newaxis], axis=1)
                codes[:, n] = np.minimum(chosen, last)
            if reporter is not None:
                reporter.advance(steps)
        if reporter is not None:
            reporter.close()
        return codes, ks

    def _weights(self, codes, n, k_n):
        weights = np.ones((len(k_n), self._sides))
        if n == 0:
            return weights
        depth = np.minimum(k_n, n)
        longest = int(depth.max())
        if longest <= 0:
            return weights
        lags = min(longest, _SHARED_LAGS)
        recent = codes[:, n - lags:n][:, ::-1]
        valid = np.arange(lags)[np.newaxis, :] < depth[:, np.newaxis]
        reinforced = reinforced_neighbors(recent, valid, self._units)
        for row in np.flatnonzero(depth > _SHARED_LAGS):
            window = codes[row, n - depth[row]:n][::-1][np.newaxis, :]
            reinforced[row] = reinforced_neighbors(
                window, np.ones(window.shape, dtype=bool), self._units)[0]
        weights[reinforced] = self._boost
        return weights

    def _summarize(self, codes, ks, replicas):
        config = self._config
        horizon = config.horizon
        per_block = max(1, int(default('batch_cells'))
                        // (32 * (horizon + 1) * self._dimension))
        window = confirmation_window_for(self._law,
                                         config.confirmation_tolerance) \
            if config.regen else 0
        summaries = []
        for start in range(0, len(replicas), per_block):
            block = codes[start:start + per_block]
            paths = np.zeros((len(block), horizon + 1, self._dimension),
                             dtype=np.int64)
            paths[:, 1:] = np.cumsum(self._units[block], axis=1)
            at_origin = ~paths[:, 1:].any(axis=2)
            ranges = range_sizes(paths, block, horizon)
            for offset in range(len(block)):
                row = start + offset
                path = paths[offset]
                summary = RunSummary(
                    replicas[row], path[-1], np.flatnonzero(
                        at_origin[offset]) + 1,
                    checkpoints={n: path[n] for n in config.checkpoints},
                    range_size=ranges[offset],
                    k_sequence=ks[row].copy() if ks is not None else None,
                    history=[tuple(site) for site in
                             path[::config.record_stride].tolist()]
                    if config.record_stride else None)
                if ks is not None:
                    summary = self._with_regenerations(summary, path,
                                                       ks[row], window)
                summaries.append(summary)
        return summaries

    def _with_regenerations(self, summary, path, ks, window):
        horizon = self._config.horizon
        # K_0..K_{H-1} were drawn, so detection runs at horizon H - 1.
        if horizon == 0:
            report = RegenerationReport([], max(1 - window, 1), horizon=0)
        else:
            report = detect_offline(ks, horizon=horizon - 1,
                                    confirmation_window=window)
        _, report, returns = attach_subwalk(path, report,
                                            dimension=self._dimension)
        return summary.with_report(report, subwalk_returns=returns)
