"""
This module writes and reads the artifacts of a run directory:

config.json      resolved configuration
replicas.jsonl   one RunSummary row per replica, in replica order
msd.csv          checkpoint,msd_mean,msd_se (msd.jsonl with format jsonl)
tests.csv        test,statistic,p_value,threshold,passed (or tests.jsonl)
summary.json     pooled EnsembleSummary

Every file is a deterministic function of the configuration and the
replica summaries.
"""
import json
import os
import pandas as pd
from random_memory_walk.algorithm.exception import AnalysisInputError
from random_memory_walk.algorithm.exception import OutputError
from random_memory_walk.algorithm.serialization.run_summary import RunSummary
from random_memory_walk.algorithm.serialization.serialization_mixin\
 import dumps, json_safe
from random_memory_walk.statistics.ensemble import EnsembleSummary

CONFIG_FILE = 'config.json'
REPLICAS_FILE = 'replicas.jsonl'
SUMMARY_FILE = 'summary.json'
ANALYSIS_DIRECTORY = 'analysis'
MSD_COLUMNS = ['checkpoint', 'msd_mean', 'msd_se']
TEST_COLUMNS = ['test', 'statistic', 'p_value', 'threshold', 'passed']


def table_name(stem, output_format):
    return '{}.{}'.format(stem, 'jsonl' if output_format == 'jsonl'
                          else 'csv')


def expected_files(output_format):
    return [CONFIG_FILE, REPLICAS_FILE, table_name('msd', output_format),
            table_name('tests', output_format), SUMMARY_FILE]


def _ensure_directory(directory):
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as error:
        raise OutputError('cannot create output directory {}: {}'.format(
            directory, error.strerror))
    if not os.access(directory, os.W_OK):
        raise OutputError('output directory {} is not writable'.format(
            directory))


def _write_text(filepath, text):
    try:
        with open(filepath, 'w', encoding='utf-8', newline='\n') as file:
            file.write(text)
    except OSError as error:
        raise OutputError('cannot write {}: {}'.format(filepath,
                                                       error.strerror))


def _write_table(directory, stem, columns, rows, output_format):
    filepath = os.path.join(directory, table_name(stem, output_format))
    if output_format == 'jsonl':
        lines = [json.dumps(json_safe(dict(zip(columns, row))),
                            sort_keys=True, separators=(',', ':'))
                 for row in rows]
        _write_text(filepath, ''.join(line + '\n' for line in lines))
        return filepath
    frame = pd.DataFrame([list(row) for row in rows], columns=columns)
    _write_text(filepath, frame.to_csv(index=False))
    return filepath


def write_summary(directory, summary, output_format):
    """Pooled tables and summary.json of an EnsembleSummary."""
    _ensure_directory(directory)
    _write_table(directory, 'msd', MSD_COLUMNS, summary.msd, output_format)
    _write_table(directory, 'tests', TEST_COLUMNS, summary.tests,
                 output_format)
    summary.save_instance(os.path.join(directory, SUMMARY_FILE))


def write_run(directory, experiment, runs, summary):
    """
    Writes every artifact of a run.

    Arguments
    ---------
    directory : str
    experiment : ExperimentConfig
    runs : list of RunSummary
    summary : EnsembleSummary
    """
    _ensure_directory(directory)
    _write_text(os.path.join(directory, CONFIG_FILE),
                dumps(experiment.to_dict()))
    rows = sorted(runs, key=lambda run: run.replica)
    _write_text(os.path.join(directory, REPLICAS_FILE),
                ''.join(run.to_json_line() + '\n' for run in rows))
    write_summary(directory, summary, experiment.format)


def read_config(directory):
    _require(directory, [CONFIG_FILE])
    with open(os.path.join(directory, CONFIG_FILE), 'r') as file:
        return json.load(file)


def read_replicas(directory):
    """RunSummary objects of replicas.jsonl, in file order."""
    _require(directory, [REPLICAS_FILE])
    runs = []
    with open(os.path.join(directory, REPLICAS_FILE), 'r') as file:
        for line in file:
            if line.strip():
                runs.append(RunSummary.from_json_line(line))
    return runs


def read_summary(directory):
    _require(directory, [SUMMARY_FILE])
    return EnsembleSummary.load_instance(os.path.join(directory,
                                                      SUMMARY_FILE))


def read_table(directory, stem, output_format):
    """Pooled table as a DataFrame."""
    name = table_name(stem, output_format)
    _require(directory, [name])
    filepath = os.path.join(directory, name)
    if output_format == 'jsonl':
        return pd.read_json(filepath, lines=True)
    return pd.read_csv(filepath)


def _require(directory, names):
    missing = [name for name in names
               if not os.path.isfile(os.path.join(directory, name))]
    if missing:
        raise AnalysisInputError(
            '{} lacks {}; expected the files written by `run`: {}'.format(
                directory, ', '.join(missing),
                ', '.join(expected_files('csv'))), missing=missing)


def require_run_files(directory):
    """Raises AnalysisInputError naming every run input that is missing."""
    if not os.path.isdir(directory):
        raise AnalysisInputError('{} is not a directory'.format(directory),
                                 missing=[CONFIG_FILE, REPLICAS_FILE])
    _require(directory, [CONFIG_FILE, REPLICAS_FILE])
