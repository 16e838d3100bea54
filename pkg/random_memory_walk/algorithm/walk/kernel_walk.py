"""
This module defines the generalized kernel walk engine and its kernel
registry.

A kernel is a callable f(x, y, window) -> weight > 0 where x is the current
site, y one of its 2d neighbors and window the frozenset of edges crossed in
the last K_n steps. The engine normalizes the weights over the neighbors.
A kernel must only look at the window up to lattice isomorphism; in debug
mode the engine checks that, together with the ellipticity floor, on every
step.
"""
import logging
import math
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import EllipticityError
from random_memory_walk.algorithm.exception import SymmetryError
from random_memory_walk.algorithm.lattice import canonical_edge, neighbors
from random_memory_walk.algorithm.walk.abstract import AbstractWalkEngine
from random_memory_walk.algorithm.walk.state_data import WalkState
from random_memory_walk.algorithm.walk.symmetry import lattice_symmetries
from random_memory_walk.algorithm.walk.symmetry import translate
from random_memory_walk.algorithm.walk.symmetry import translate_window
from random_memory_walk.utilities.random_stream import UniformStream
from random_memory_walk.utilities.random_stream import replica_seed

logger = logging.getLogger(__name__)

DEBUG_STREAM_SALT = 0x6b65726e656c
SYMMETRY_TOLERANCE = 1e-12
TRANSLATION_RANGE = 1000


class ReinforcementKernel(object):
    """1 + delta * 1{{x, y} in window}: the random memory walk weights."""

    def __init__(self, delta):
        self.delta = float(delta)

    def __call__(self, x, y, window):
        if window and canonical_edge(x, y) in window:
            return 1.0 + self.delta
        return 1.0

    def __repr__(self):
        return 'ReinforcementKernel(delta={})'.format(self.delta)


class ConstantKernel(object):
    """Ignores the window; the walk is the simple random walk."""

    def __call__(self, x, y, window):
        return 1.0

    def __repr__(self):
        return 'ConstantKernel()'


KERNELS = {
    'reinforcement': lambda config: ReinforcementKernel(config.delta),
    'constant': lambda config: ConstantKernel()
}


def register_kernel(name, factory):
    """
    Makes `name` usable as kernel.name in a configuration.

    Arguments
    ---------
    name : str
    factory : callable
        Called with the WalkConfig, returns the kernel callable.
    """
    if not callable(factory):
        raise TypeError('Kernel factory for {!r} is not callable'.format(name))
    KERNELS[name] = factory


def kernel_for(config):
    kernel = config.kernel
    if kernel is None:
        kernel = 'reinforcement'
    if callable(kernel):
        return kernel
    if kernel not in KERNELS:
        raise ConfigurationError('unknown kernel {!r}; registered kernels: {}'
                                 .format(kernel, ', '.join(sorted(KERNELS))),
                                 field='kernel.name')
    return KERNELS[kernel](config)


class KernelWalkEngine(AbstractWalkEngine):
    """
    Walk driven by a registered kernel.

    Keeps the edge trail of the run so the window R_{n,K_n} can be handed to
    the kernel as an edge set.
    """

    def __init__(self, config):
        super().__init__(config)
        self._kernel = kernel_for(config)
        self._floor = config.ellipticity_floor
        self._debug = config.debug
        self._symmetries = lattice_symmetries(self._dimension) \
            if self._debug else []
        self._debug_stream = UniformStream(
            replica_seed(config.seed, DEBUG_STREAM_SALT)) \
            if self._debug else None
        if config.ellipticity_split:
            self._enable_split(self._floor)

    @property
    def kernel(self):
        return self._kernel

    def new_state(self):
        return WalkState(self._dimension, keep_trail=True)

    def step_weights(self, state, k_n):
        x = state.position
        window = state.window_edges(k_n)
        weights = self._evaluate(x, window)
        if self._debug:
            self._check_ellipticity(state, x, weights)
            self._check_symmetry(state, x, window, weights)
            self._check_symmetry(state, x, self._random_window(x), None)
        return weights

    def _evaluate(self, x, window):
        weights = [float(self._kernel(x, y, window)) for y in neighbors(x)]
        for y, weight in zip(neighbors(x), weights):
            if not (weight > 0 and math.isfinite(weight)):
                raise EllipticityError(
                    'Kernel {!r} returned weight {} for the step {} -> {}; '
                    'weights must be positive and finite'.format(
                        self._kernel, weight, x, y))
        return weights

    def _check_ellipticity(self, state, x, weights):
        if self._floor is None:
            return
        total = sum(weights)
        for y, weight in zip(neighbors(x), weights):
            probability = weight / total
            if probability < self._floor * (1 - SYMMETRY_TOLERANCE):
                logger.error('Ellipticity violated at step %d', state.n)
                raise EllipticityError(
                    'At step {} the kernel gives {} -> {} probability {:.6g}, '
                    'below the ellipticity floor {:.6g}'.format(
                        state.n, x, y, probability, self._floor))

    def _check_symmetry(self, state, x, window, weights):
        """
        f(x, g y, g W) == f(x, y, W) for every symmetry g fixing x, and
        f(x + t, y + t, W + t) == f(x, y, W) for a random translation t.
        """
        if weights is None:
            weights = self._evaluate(x, window)
        targets = neighbors(x)
        for g in self._symmetries:
            image = g.apply_window(window, x)
            for y, weight in zip(targets, weights):
                moved = float(self._kernel(x, g.apply(y, x), image))
                self._compare(state, weight, moved, x, y, window,
                              '{!r}'.format(g))
        shift = tuple(int(self._debug_stream.uniform()
                          * (2 * TRANSLATION_RANGE + 1)) - TRANSLATION_RANGE
                      for _ in range(self._dimension))
        shifted = translate_window(window, shift)
        origin_shifted = translate(x, shift)
        for y, weight in zip(targets, weights):
            moved = float(self._kernel(origin_shifted, translate(y, shift),
                                       shifted))
            self._compare(state, weight, moved, x, y, window,
                          'translation by {}'.format(shift))

    def _compare(self, state, expected, actual, x, y, window, description):
        if abs(expected - actual) <= SYMMETRY_TOLERANCE * max(
                abs(expected), 1.0):
            return
        logger.error('Kernel symmetry violated at step %d', state.n)
        raise SymmetryError(
            'Kernel {!r} is not invariant under {} at step {}: '
            'f({}, {}, W) = {!r} but the image gives {!r}; W = {}'.format(
                self._kernel, description, state.n, x, y, expected, actual,
                sorted(window)))

    def _random_window(self, x):
        """A few random edges within L1 distance 2 of x."""
        stream = self._debug_stream
        size = int(stream.uniform() * (2 * self._dimension + 1))
        edges = set()
        for _ in range(size):
            start = neighbors(x)[int(stream.uniform()
                                     * 2 * self._dimension)]
            if stream.uniform() < 0.5:
                start = x
            end = neighbors(start)[int(stream.uniform()
                                       * 2 * self._dimension)]
            edges.add(canonical_edge(start, end))
        return frozenset(edges)
