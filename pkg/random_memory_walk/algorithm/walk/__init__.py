from random_memory_walk.algorithm.walk.abstract import window_contains
from random_memory_walk.algorithm.walk.kernel_walk import KernelWalkEngine
from random_memory_walk.algorithm.walk.kernel_walk import register_kernel
from random_memory_walk.algorithm.walk.memory_walk import MemoryWalkEngine
from random_memory_walk.algorithm.walk.once_reinforced\
 import OnceReinforcedEngine
from random_memory_walk.algorithm.walk.state_data import StepLog
from random_memory_walk.algorithm.walk.state_data import WalkConfig
from random_memory_walk.algorithm.walk.state_data import WalkState

_ENGINE_CLASSES = {
    'memory_walk': MemoryWalkEngine,
    'orrw': OnceReinforcedEngine,
    'kernel': KernelWalkEngine
}


def engine_for(config):
    """Engine instance for config.engine."""
    return _ENGINE_CLASSES[config.engine](config)


def run(config, stream=None, replica=0, verbose=False):
    """(final WalkState, StepLog or None, RunSummary) of one walk."""
    return engine_for(config).run(stream=stream, replica=replica,
                                  verbose=verbose)
