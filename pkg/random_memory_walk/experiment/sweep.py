"""
This module runs parameter sweeps: a base experiment plus a set of cells,
each cell overriding some dotted keys (e.g. walk.delta) and getting its own
run directory.

Cells come either from a [sweep.grid] table, expanded as the cartesian
product of its value lists, or from explicit [[sweep.cells]] entries with a
label. manifest.json in the sweep output directory maps every cell to its
parameters, directory and status, and is rewritten after each cell so an
interrupted sweep can be resumed.
"""
import copy
import itertools
import json
import logging
import os
import re
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import RandomMemoryWalkError
from random_memory_walk.algorithm.serialization.serialization_mixin\
 import dumps
from random_memory_walk.experiment.config_loading import ExperimentConfig
from random_memory_walk.experiment.config_loading import locate
from random_memory_walk.experiment.config_loading import parse_toml
from random_memory_walk.experiment.config_loading import read_text
from random_memory_walk.experiment.runner import run_experiment

logger = logging.getLogger(__name__)

MANIFEST_FILE = 'manifest.json'
COMPLETED = 'completed'
FAILED = 'failed'
PENDING = 'pending'

_UNSAFE = re.compile(r'[^A-Za-z0-9_.=-]+')


def flatten(values, prefix=''):
    """{'walk': {'delta': [..]}} -> {'walk.delta': [..]}."""
    flat = {}
    for key, value in values.items():
        name = prefix + key
        if isinstance(value, dict):
            flat.update(flatten(value, name + '.'))
        else:
            flat[name] = value
    return flat


def apply_overrides(base, overrides):
    values = copy.deepcopy(base)
    for dotted, value in overrides.items():
        section, _, key = dotted.partition('.')
        if not key:
            raise ConfigurationError('sweep key {!r} must name section.key'
                                     .format(dotted), field=dotted)
        values.setdefault(section, {})[key] = value
    return values


def cell_label(overrides):
    return ','.join('{}={}'.format(key, overrides[key])
                    for key in sorted(overrides))


def directory_name(label):
    return _UNSAFE.sub('_', label)


class SweepCell(object):

    def __init__(self, label, overrides):
        self.label = label
        self.overrides = overrides

    def __repr__(self):
        return 'SweepCell({!r})'.format(self.label)


class SweepConfig(object):
    """
    Base experiment values, the list of cells and the sweep output
    directory.
    """

    def __init__(self, values, source=None, text=None):
        values = copy.deepcopy(values)
        sweep = values.pop('sweep', None)
        if not isinstance(sweep, dict):
            raise ConfigurationError('a sweep file needs a [sweep] table',
                                     field='sweep', source=source)
        self.base = values
        self.source = source
        self._text = text
        unknown = sorted(set(sweep) - {'output', 'grid', 'cells'})
        if unknown:
            self._fail('unknown key sweep.{}'.format(unknown[0]),
                       'sweep', unknown[0])
        self.output = sweep.get('output', 'sweep')
        grid = flatten(sweep.get('grid', {}))
        cells = sweep.get('cells', [])
        if grid and cells:
            self._fail('use either sweep.grid or sweep.cells, not both',
                       'sweep', 'cells')
        if grid:
            self.cells = self._grid_cells(grid)
        else:
            self.cells = self._explicit_cells(cells)
        if not self.cells:
            self._fail('the sweep defines no cells', 'sweep', None)

    def _fail(self, message, section, key):
        raise ConfigurationError(message, field='{}.{}'.format(section, key)
                                 if key else section,
                                 line=locate(self._text, section, key),
                                 source=self.source)

    def _grid_cells(self, grid):
        keys = sorted(grid)
        for key in keys:
            if not isinstance(grid[key], list) or not grid[key]:
                self._fail('sweep.grid.{} must be a nonempty list'.format(key),
                           'sweep.grid', key.split('.')[-1])
        cells = []
        for values in itertools.product(*(grid[key] for key in keys)):
            overrides = dict(zip(keys, values))
            cells.append(SweepCell(cell_label(overrides), overrides))
        self._check_unique(cells)
        return cells

    def _explicit_cells(self, entries):
        cells = []
        for entry in entries:
            entry = dict(entry)
            label = entry.pop('label', None)
            overrides = flatten(entry)
            if label is None:
                label = cell_label(overrides)
            cells.append(SweepCell(str(label), overrides))
        self._check_unique(cells)
        return cells

    def _check_unique(self, cells):
        seen = set()
        for cell in cells:
            name = directory_name(cell.label)
            if name in seen:
                self._fail('duplicate sweep cell label {!r}'.format(
                    cell.label), 'sweep', 'label')
            seen.add(name)

    def experiment(self, cell):
        """ExperimentConfig of a cell, writing into its own directory."""
        values = apply_overrides(self.base, cell.overrides)
        values.setdefault('experiment', {})['output'] = os.path.join(
            self.output, directory_name(cell.label))
        return ExperimentConfig(values, source='{} [cell {}]'.format(
            self.source, cell.label) if self.source else None)


def load_sweep(filepath):
    text = read_text(filepath)
    return SweepConfig(parse_toml(text, source=str(filepath)),
                       source=str(filepath), text=text)


def read_manifest(directory):
    filepath = os.path.join(directory, MANIFEST_FILE)
    if not os.path.isfile(filepath):
        return {'cells': []}
    with open(filepath, 'r') as file:
        return json.load(file)


def write_manifest(directory, manifest):
    os.makedirs(directory, exist_ok=True)
    filepath = os.path.join(directory, MANIFEST_FILE)
    temporary = filepath + '.tmp'
    with open(temporary, 'w', encoding='utf-8', newline='\n') as file:
        file.write(dumps(manifest))
    os.replace(temporary, filepath)


def run_sweep(sweep, workers=None, verbose=False):
    """
    Runs every cell not already completed in the manifest.

    Returns
    -------
    dict
        The manifest; cells that raised are marked failed with the error.
    """
    previous = {entry['label']: entry
                for entry in read_manifest(sweep.output)['cells']}
    entries = []
    for cell in sweep.cells:
        output = os.path.join(sweep.output, directory_name(cell.label))
        entries.append({'label': cell.label, 'parameters': cell.overrides,
                        'output': output,
                        'status': previous.get(cell.label, {}).get(
                            'status', PENDING),
                        'error': None})
    manifest = {'cells': entries}
    write_manifest(sweep.output, manifest)
    for cell, entry in zip(sweep.cells, entries):
        if entry['status'] == COMPLETED and os.path.isdir(entry['output']):
            logger.info('Skipping completed cell %s', cell.label)
            continue
        if verbose:
            print('Cell {}'.format(cell.label))
        try:
            run_experiment(sweep.experiment(cell), workers=workers,
                           verbose=verbose)
        except RandomMemoryWalkError as error:
            logger.error('Cell %s failed: %s', cell.label, error)
            entry.update(status=FAILED, error=str(error))
        else:
            entry.update(status=COMPLETED, error=None)
        write_manifest(sweep.output, manifest)
    return manifest


def failed_cells(manifest):
    return [entry['label'] for entry in manifest['cells']
            if entry['status'] != COMPLETED]
