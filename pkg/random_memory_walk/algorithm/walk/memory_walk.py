"""
This module defines the random memory walk engine: at time n the walk
reinforces, with weight 1 + delta, only the edges it crossed during its
last K_n steps.
"""
from random_memory_walk.algorithm.lattice import incident_edges
from random_memory_walk.algorithm.walk.abstract import AbstractWalkEngine
from random_memory_walk.algorithm.walk.abstract import window_contains


def minimal_jump_probability(dimension, delta):
    """
    Smallest probability the reinforced jump law can give a neighbor:
    one unreinforced edge against 2d - 1 reinforced ones.
    """
    return 1.0 / (1.0 + (2 * dimension - 1) * (1.0 + delta))


class MemoryWalkEngine(AbstractWalkEngine):
    """
    Weight of neighbor y of x: 1 + delta * 1{{x, y} in R_{n, K_n}}.
    """

    def __init__(self, config):
        super().__init__(config)
        if config.ellipticity_split:
            self._enable_split(minimal_jump_probability(self._dimension,
                                                        self._delta))

    def step_weights(self, state, k_n):
        if k_n <= 0 or state.n == 0:
            return [1.0] * (2 * self._dimension)
        boost = 1.0 + self._delta
        return [boost if window_contains(state, edge, k_n) else 1.0
                for edge in incident_edges(state.position)]
