"""
This module defines the configuration, the mutable state and the step log
of a single walk.
"""
import numpy as np
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import ResourceLimitError
from random_memory_walk.algorithm.lattice import origin
from random_memory_walk.algorithm.memory_law import AbstractMemoryLaw
from random_memory_walk.configuration import default

ENGINES = ('memory_walk', 'orrw', 'kernel')


class WalkConfig(object):
    """
    Parameters of one walk.

    Arguments
    ---------
    dimension : int
        Lattice dimension d >= 1.
    delta : float
        Reinforcement parameter, > 0.
    memory : AbstractMemoryLaw
        Law of the memory lengths K_n.

    Keyword arguments
    -----------------
    engine : str
        One of 'memory_walk', 'orrw', 'kernel'.
    horizon : int
        Number of steps.
    seed : int
        Seed of the walk's uniform stream.
    record_stride : int
        Record X_n for n a multiple of the stride; 0 keeps a summary only.
    checkpoints : sequence of int
        Step indices whose positions are kept for MSD / CLT statistics.
    regen : bool
        Keep the K-sequence and the positions at regeneration candidates.
    keep_log : bool
        Keep the full StepLog.
    kernel : str or callable
        Kernel name from the registry or a kernel callable (engine 'kernel').
    ellipticity_floor : float
        Lower bound c on every transition probability (engine 'kernel').
    ellipticity_split : bool
        Run the memory-walk or kernel engine through the ellipticity split.
    debug : bool
        Check the kernel contract on every step.
    max_history_points : int
        Budget of recorded positions; see check_resources.
    confirmation_tolerance : float
        Regeneration candidates are censored within the window W with
        tail(W) below this tolerance.
    batched : bool
        Step many replicas together with BatchedMemoryWalk (memory_walk
        engine without the ellipticity split).
    """

    def __init__(self, dimension, delta, memory, engine='memory_walk',
                 horizon=1, seed=0, record_stride=0, checkpoints=(),
                 regen=False, keep_log=False, kernel=None,
                 ellipticity_floor=None, ellipticity_split=False,
                 debug=False, max_history_points=None,
                 confirmation_tolerance=None, batched=False):
        if int(dimension) != dimension or dimension < 1:
            raise ConfigurationError('dimension must be an integer >= 1, '
                                     'got {}'.format(dimension),
                                     field='walk.dimension')
        if not delta > 0:
            raise ConfigurationError('delta must be > 0, got {}'.format(
                delta), field='walk.delta')
        if not isinstance(memory, AbstractMemoryLaw):
            raise ConfigurationError('memory must be a memory law, '
                                     'got {!r}'.format(memory),
                                     field='memory.family')
        if engine not in ENGINES:
            raise ConfigurationError('engine must be one of {}, got '
                                     '{!r}'.format(', '.join(ENGINES), engine),
                                     field='walk.engine')
        if int(horizon) != horizon or horizon < 0:
            raise ConfigurationError('horizon must be an integer >= 0, '
                                     'got {}'.format(horizon),
                                     field='walk.horizon')
        if int(record_stride) != record_stride or record_stride < 0:
            raise ConfigurationError('record_stride must be an integer >= 0, '
                                     'got {}'.format(record_stride),
                                     field='walk.record_stride')
        checkpoints = [int(n) for n in checkpoints]
        if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
            raise ConfigurationError(
                'checkpoints must be strictly increasing',
                field='experiment.checkpoints')
        if checkpoints and (checkpoints[0] < 0 or checkpoints[-1] > horizon):
            raise ConfigurationError('checkpoints must lie in [0, horizon]',
                                     field='experiment.checkpoints')
        if ellipticity_floor is not None and not 0 < ellipticity_floor \
                <= 1.0 / (2 * dimension):
            raise ConfigurationError(
                'ellipticity_floor must lie in (0, 1/(2d)], got {}'.format(
                    ellipticity_floor), field='kernel.ellipticity_floor')
        if ellipticity_split and engine == 'orrw':
            raise ConfigurationError('ellipticity_split applies to the '
                                     'memory_walk and kernel engines only',
                                     field='walk.ellipticity_split')
        if ellipticity_split and engine == 'kernel' \
                and ellipticity_floor is None:
            raise ConfigurationError('ellipticity_split with the kernel '
                                     'engine needs kernel.ellipticity_floor',
                                     field='kernel.ellipticity_floor')
        if regen and engine == 'orrw':
            raise ConfigurationError('regeneration analysis is not defined '
                                     'for the orrw engine',
                                     field='analysis.regen')
        if batched and (engine != 'memory_walk' or ellipticity_split):
            raise ConfigurationError('batched runs need the memory_walk '
                                     'engine without the ellipticity split',
                                     field='walk.batched')
        self.dimension = int(dimension)
        self.delta = float(delta)
        self.memory = memory
        self.engine = engine
        self.horizon = int(horizon)
        self.seed = int(seed)
        self.record_stride = int(record_stride)
        self.checkpoints = tuple(checkpoints)
        self.regen = bool(regen)
        self.keep_log = bool(keep_log)
        self.kernel = kernel
        self.ellipticity_floor = ellipticity_floor
        self.ellipticity_split = bool(ellipticity_split)
        self.debug = bool(debug)
        self.max_history_points = default('max_history_points',
                                          max_history_points)
        self.confirmation_tolerance = default('confirmation_tolerance',
                                              confirmation_tolerance)
        self.batched = bool(batched)

    @property
    def needs_log(self):
        return self.keep_log or self.regen

    def check_resources(self):
        """Raises ResourceLimitError if the run would not fit the budget."""
        if self.record_stride > 0:
            points = self.horizon // self.record_stride + 1
            if points > self.max_history_points:
                raise ResourceLimitError(
                    'Recording every {} steps over a horizon of {} keeps {} '
                    'positions, above the budget of {}; raise record_stride'
                    .format(self.record_stride, self.horizon, points,
                            self.max_history_points))
        if self.needs_log and self.horizon > 10 * self.max_history_points:
            raise ResourceLimitError(
                'A step log over {} steps exceeds the budget of {} entries'
                .format(self.horizon, 10 * self.max_history_points))

    def copy_with(self, **changes):
        values = dict(dimension=self.dimension, delta=self.delta,
                      memory=self.memory, engine=self.engine,
                      horizon=self.horizon, seed=self.seed,
                      record_stride=self.record_stride,
                      checkpoints=self.checkpoints, regen=self.regen,
                      keep_log=self.keep_log, kernel=self.kernel,
                      ellipticity_floor=self.ellipticity_floor,
                      ellipticity_split=self.ellipticity_split,
                      debug=self.debug,
                      max_history_points=self.max_history_points,
                      confirmation_tolerance=self.confirmation_tolerance,
                      batched=self.batched)
        values.update(changes)
        return WalkConfig(**values)


class WalkState(object):
    """
    State of a walk after n steps.

    `last_traversal` maps every crossed edge to the largest step index at
    which it was crossed; its key set is the range E_n.
    """

    __slots__ = ('position', 'n', 'last_traversal', 'history',
                 'return_times', 'checkpoint_positions', 'edge_trail')

    def __init__(self, dimension, keep_trail=False):
        self.position = origin(dimension)
        self.n = 0
        self.last_traversal = {}
        self.history = []
        self.return_times = []
        self.checkpoint_positions = {}
        self.edge_trail = [] if keep_trail else None

    @property
    def dimension(self):
        return len(self.position)

    @property
    def range_size(self):
        return len(self.last_traversal)

    def window_edges(self, k_n):
        """
        R_{n,k_n} as a frozenset; needs the edge trail.
        """
        if k_n <= 0 or self.n == 0:
            return frozenset()
        start = max(self.n - k_n, 0)
        return frozenset(self.edge_trail[start:self.n])


class StepLog(object):
    """
    Per-step record (K_n, chosen axis, chosen sign), preallocated for the
    whole horizon.
    """

    def __init__(self, capacity):
        try:
            self._ks = np.zeros(capacity, dtype=np.int64)
            self._axes = np.zeros(capacity, dtype=np.int8)
            self._signs = np.zeros(capacity, dtype=np.int8)
        except MemoryError:
            raise ResourceLimitError('Cannot allocate a step log of {} '
                                     'entries'.format(capacity))
        self._length = 0

    def append(self, k_n, axis, sign):
        self._ks[self._length] = k_n
        self._axes[self._length] = axis
        self._signs[self._length] = sign
        self._length += 1

    def __len__(self):
        return self._length

    @property
    def k_sequence(self):
        return self._ks[:self._length]

    @property
    def axes(self):
        return self._axes[:self._length]

    @property
    def signs(self):
        return self._signs[:self._length]

    def positions(self, dimension):
        """Reconstructs X_0..X_n as an (n+1, d) integer array."""
        steps = np.zeros((self._length + 1, dimension), dtype=np.int64)
        rows = np.arange(1, self._length + 1)
        steps[rows, self.axes.astype(np.int64)] = self.signs
        return np.cumsum(steps, axis=0)
