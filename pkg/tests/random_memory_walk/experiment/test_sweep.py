import unittest
import os
import shutil
import tempfile
from unittest.mock import patch
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.exception import ResourceLimitError
from random_memory_walk.experiment.sweep import SweepConfig
from random_memory_walk.experiment.sweep import apply_overrides
from random_memory_walk.experiment.sweep import cell_label
from random_memory_walk.experiment.sweep import directory_name
from random_memory_walk.experiment.sweep import failed_cells
from random_memory_walk.experiment.sweep import flatten
from random_memory_walk.experiment.sweep import load_sweep
from random_memory_walk.experiment.sweep import read_manifest
from random_memory_walk.experiment.sweep import run_sweep

FIXTURES = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                        '../fixtures/experiments'))


def base_values():
    return {'walk': {'dimension': 1, 'delta': 1.0, 'horizon': 30},
            'memory': {'family': 'geometric', 'p': 0.5},
            'experiment': {'replicas': 2, 'checkpoints': [0, 30]}}


class TestSweepConfig(unittest.TestCase):

    def test_helpers(self):
        self.assertEqual(flatten({'walk': {'delta': [1, 2]}, 'x': 1}),
                         {'walk.delta': [1, 2], 'x': 1})
        values = apply_overrides(base_values(), {'walk.delta': 3.0,
                                                 'kernel.debug': True})
        self.assertEqual(values['walk']['delta'], 3.0)
        self.assertEqual(values['kernel'], {'debug': True})
        self.assertEqual(base_values()['walk']['delta'], 1.0)
        with self.assertRaises(ConfigurationError):
            apply_overrides(base_values(), {'delta': 3.0})
        self.assertEqual(cell_label({'walk.delta': 2.0, 'memory.p': 0.2}),
                         'memory.p=0.2,walk.delta=2.0')
        self.assertEqual(directory_name('a b/c=1'), 'a_b_c=1')

    def test_grid(self):
        sweep = load_sweep(os.path.join(FIXTURES, 'grid.toml'))
        self.assertEqual(sweep.output, 'sweep')
        self.assertEqual([cell.label for cell in sweep.cells],
                         ['memory.p=0.2,walk.delta=0.5',
                          'memory.p=0.2,walk.delta=2.0',
                          'memory.p=0.6,walk.delta=0.5',
                          'memory.p=0.6,walk.delta=2.0'])
        experiment = sweep.experiment(sweep.cells[1])
        self.assertEqual(experiment.walk.delta, 2.0)
        self.assertEqual(experiment.law.to_dict(),
                         {'family': 'geometric', 'p': 0.2})
        self.assertEqual(experiment.output, os.path.join(
            'sweep', 'memory.p=0.2,walk.delta=2.0'.replace(',', '_')))

    def test_explicit_cells(self):
        values = base_values()
        values['sweep'] = {'output': 'out', 'cells': [
            {'label': 'weak', 'walk': {'delta': 0.1}},
            {'walk': {'delta': 5.0}}]}
        sweep = SweepConfig(values)
        self.assertEqual([cell.label for cell in sweep.cells],
                         ['weak', 'walk.delta=5.0'])

    def test_invalid_sweeps(self):
        with self.assertRaises(ConfigurationError):
            SweepConfig(base_values())
        values = base_values()
        values['sweep'] = {'grid': {'walk.delta': []}}
        with self.assertRaises(ConfigurationError):
            SweepConfig(values)
        values['sweep'] = {'cells': [{'label': 'a'}, {'label': 'a'}]}
        with self.assertRaises(ConfigurationError):
            SweepConfig(values)
        values['sweep'] = {'grid': {'walk.delta': [1.0]},
                           'cells': [{'label': 'a'}]}
        with self.assertRaises(ConfigurationError):
            SweepConfig(values)
        values['sweep'] = {'repeat': 2, 'grid': {'walk.delta': [1.0]}}
        with self.assertRaises(ConfigurationError):
            SweepConfig(values)


class TestRunSweep(unittest.TestCase):

    def setUp(self):
        self._temp_directory = tempfile.mkdtemp()
        self.output = os.path.join(self._temp_directory, 'sweep')
        values = base_values()
        values['sweep'] = {'output': self.output,
                           'grid': {'walk.delta': [0.5, 2.0]}}
        self.sweep = SweepConfig(values)

    def tearDown(self):
        shutil.rmtree(self._temp_directory)

    def test_run_and_resume(self):
        manifest = run_sweep(self.sweep)
        self.assertEqual(failed_cells(manifest), [])
        for entry in manifest['cells']:
            self.assertEqual(entry['status'], 'completed')
            self.assertTrue(os.path.isfile(os.path.join(entry['output'],
                                                        'summary.json')))
        self.assertEqual(read_manifest(self.output), manifest)

        with patch('random_memory_walk.experiment.sweep.run_experiment') \
                as runner:
            run_sweep(self.sweep)
        runner.assert_not_called()

    def test_failed_cell_is_recorded(self):
        calls = []

        def flaky(experiment, workers=None, verbose=False):
            calls.append(experiment.walk.delta)
            if experiment.walk.delta == 0.5:
                raise ResourceLimitError('too large')

        with patch('random_memory_walk.experiment.sweep.run_experiment',
                   side_effect=flaky):
            manifest = run_sweep(self.sweep)
        self.assertEqual(calls, [0.5, 2.0])
        self.assertEqual(failed_cells(manifest), ['walk.delta=0.5'])
        self.assertEqual(manifest['cells'][0]['error'], 'too large')
        self.assertEqual(read_manifest(self.output)['cells'][0]['status'],
                         'failed')


if __name__ == '__main__':
    unittest.main()
