"""
This module defines the once-reinforced random walk engine: every edge the
walk has ever crossed keeps weight 1 + delta forever.
"""
from random_memory_walk.algorithm.lattice import incident_edges
from random_memory_walk.algorithm.walk.abstract import AbstractWalkEngine


class OnceReinforcedEngine(AbstractWalkEngine):
    """
    Weight of neighbor y of x: 1 + delta * 1{{x, y} in E_n}, E_n the key
    set of the last-traversal map.

    K_n is still drawn on every step so that the stream consumption, and
    hence the K-sequence of a seed, matches the other engines.
    """

    def step_weights(self, state, k_n=None):
        boost = 1.0 + self._delta
        crossed = state.last_traversal
        return [boost if edge in crossed else 1.0
                for edge in incident_edges(state.position)]
