from random_memory_walk.algorithm.memory_law import memory_law
from random_memory_walk.algorithm.walk import WalkConfig
from random_memory_walk.algorithm.walk import engine_for
from random_memory_walk.algorithm.walk import run
from random_memory_walk.algorithm.regeneration import detect_offline
from random_memory_walk.experiment.config_loading import ExperimentConfig
from random_memory_walk.experiment.config_loading import load_experiment
from random_memory_walk.statistics.ensemble import summarize
