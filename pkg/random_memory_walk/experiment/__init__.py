from random_memory_walk.experiment.config_loading import load_experiment
from random_memory_walk.experiment.runner import analyze_directory
from random_memory_walk.experiment.runner import run_ensemble
from random_memory_walk.experiment.runner import run_experiment
from random_memory_walk.experiment.sweep import load_sweep
from random_memory_walk.experiment.sweep import run_sweep
