"""
This module runs the replicas of an experiment, optionally on a pool of
worker processes.

Replica r draws from a stream seeded by SplitMix64(master_seed XOR r), so
the results do not depend on the number of workers or on scheduling;
they are always returned in replica order. With walk.batched, blocks of
replicas are stepped together by BatchedMemoryWalk; each replica keeps its
own stream, so the summaries are the same as one replica at a time.
"""
import logging
import os
from time import time
from joblib import Parallel, delayed
from random_memory_walk.algorithm.exception import AnalysisInputError
from random_memory_walk.algorithm.walk import engine_for
from random_memory_walk.algorithm.walk.batched import BatchedMemoryWalk
from random_memory_walk.experiment.artifacts import ANALYSIS_DIRECTORY
from random_memory_walk.experiment.artifacts import CONFIG_FILE
from random_memory_walk.experiment.artifacts import REPLICAS_FILE
from random_memory_walk.experiment.artifacts import read_config
from random_memory_walk.experiment.artifacts import read_replicas
from random_memory_walk.experiment.artifacts import require_run_files
from random_memory_walk.experiment.artifacts import write_run
from random_memory_walk.experiment.artifacts import write_summary
from random_memory_walk.experiment.config_loading import ExperimentConfig
from random_memory_walk.statistics.ensemble import summarize
from random_memory_walk.utilities.progress import ProgressReporter
from random_memory_walk.utilities.random_stream import UniformStream
from random_memory_walk.utilities.random_stream import replica_seed

logger = logging.getLogger(__name__)


def run_replica(walk_config, master_seed, replica):
    """RunSummary of one replica."""
    seed = replica_seed(master_seed, replica)
    config = walk_config.copy_with(seed=seed)
    _, _, summary = engine_for(config).run(stream=UniformStream(seed),
                                           replica=replica)
    return summary


def run_block(walk_config, master_seed, replicas, verbose=False):
    """RunSummaries of a block of replicas stepped together."""
    replicas = list(replicas)
    seeds = [replica_seed(master_seed, replica) for replica in replicas]
    return BatchedMemoryWalk(walk_config).run(seeds, replicas=replicas,
                                              verbose=verbose)


def _run_blocks(experiment, workers, verbose):
    walk_config = experiment.walk
    size = BatchedMemoryWalk(walk_config).block_size()
    blocks = [range(start, min(start + size, experiment.replicas))
              for start in range(0, experiment.replicas, size)]
    logger.info('Stepping %d replicas in %d block(s) of up to %d',
                experiment.replicas, len(blocks), size)
    if workers == 1 or len(blocks) == 1:
        results = [run_block(walk_config, experiment.master_seed, block,
                             verbose=verbose) for block in blocks]
    else:
        results = Parallel(n_jobs=workers, verbose=5 if verbose else 0)(
            delayed(run_block)(walk_config, experiment.master_seed, block)
            for block in blocks)
    return [run for block in results for run in block]


def run_ensemble(experiment, workers=None, verbose=False):
    """
    Arguments
    ---------
    experiment : ExperimentConfig

    Keyword arguments
    -----------------
    workers : int
        Size of the worker pool; overrides experiment.workers. 1 runs in
        process, -1 uses every core.
    verbose : bool
        Progress bar on stderr.

    Returns
    -------
    list of RunSummary, in replica order
    """
    workers = experiment.workers if workers is None else workers
    walk_config = experiment.walk
    walk_config.check_resources()
    ti = time()
    if verbose:
        print('Running {} replicas of {} steps, engine {}, memory {}, '
              '{} worker(s)'.format(experiment.replicas, walk_config.horizon,
                                    walk_config.engine, walk_config.memory,
                                    workers))
    if walk_config.batched:
        runs = _run_blocks(experiment, workers, verbose)
    elif workers == 1:
        reporter = ProgressReporter(experiment.replicas, label='replicas') \
            if verbose else None
        runs = []
        for replica in range(experiment.replicas):
            runs.append(run_replica(walk_config, experiment.master_seed,
                                    replica))
            if reporter is not None:
                reporter.advance()
        if reporter is not None:
            reporter.close()
    else:
        runs = Parallel(n_jobs=workers, verbose=5 if verbose else 0)(
            delayed(run_replica)(walk_config, experiment.master_seed, replica)
            for replica in range(experiment.replicas))
    logger.info('%d replicas done in %.2f minutes', len(runs),
                (time() - ti) / 60.)
    return runs


def run_experiment(experiment, output=None, workers=None, verbose=False):
    """
    Simulates every replica, folds the ensemble and writes the run
    directory. Returns the EnsembleSummary.
    """
    output = experiment.output if output is None else output
    runs = run_ensemble(experiment, workers=workers, verbose=verbose)
    summary = summarize(runs, experiment.analysis)
    write_run(output, experiment, runs, summary)
    logger.info('Artifacts written to %s', output)
    return summary


def analyze_directory(directory):
    """
    Re-runs the pooled statistics over the persisted replica summaries of
    a run directory and writes them under <directory>/analysis. Never
    simulates and never touches the run files.
    """
    require_run_files(directory)
    values = read_config(directory)
    experiment = ExperimentConfig.from_dict(
        values, source=os.path.join(directory, CONFIG_FILE))
    runs = read_replicas(directory)
    if len(runs) != experiment.replicas:
        raise AnalysisInputError(
            '{} holds {} replica rows, the configuration asks for {}'.format(
                os.path.join(directory, REPLICAS_FILE), len(runs),
                experiment.replicas), missing=[REPLICAS_FILE])
    summary = summarize(runs, experiment.analysis)
    write_summary(os.path.join(directory, ANALYSIS_DIRECTORY), summary,
                  experiment.format)
    return summary
