import unittest
import os
from random_memory_walk.algorithm.exception import ConfigurationError
from random_memory_walk.algorithm.memory_law import GeometricLaw
from random_memory_walk.experiment.config_loading import ExperimentConfig
from random_memory_walk.experiment.config_loading import load_experiment
from random_memory_walk.experiment.config_loading import locate
from random_memory_walk.experiment.config_loading import parse_toml

FIXTURES = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                        '../fixtures/experiments'))


def fixture(name):
    return os.path.join(FIXTURES, name)


def base_values():
    return {'walk': {'dimension': 1, 'delta': 1.0, 'horizon': 20},
            'memory': {'family': 'geometric', 'p': 0.5},
            'experiment': {'replicas': 2}}


class TestExperimentConfig(unittest.TestCase):

    def assert_field(self, values, field):
        with self.assertRaises(ConfigurationError) as context:
            ExperimentConfig(values)
        self.assertEqual(context.exception.field, field)
        return context.exception

    def test_load_minimal(self):
        experiment = load_experiment(fixture('minimal.toml'))
        self.assertEqual(experiment.replicas, 8)
        self.assertEqual(experiment.master_seed, 20240611)
        self.assertEqual(experiment.format, 'csv')
        self.assertEqual(experiment.workers, 1)
        self.assertEqual(experiment.law, GeometricLaw(0.5))
        self.assertEqual(experiment.walk.dimension, 2)
        self.assertEqual(experiment.walk.checkpoints, (0, 100, 200, 300))
        self.assertTrue(experiment.walk.regen)
        self.assertTrue(experiment.analysis.regen)
        self.assertEqual(experiment.analysis.return_cutoff, 50)

    def test_load_kernel(self):
        experiment = load_experiment(fixture('kernel.toml'))
        self.assertEqual(experiment.walk.engine, 'kernel')
        self.assertEqual(experiment.walk.kernel, 'reinforcement')
        self.assertTrue(experiment.walk.debug)
        self.assertTrue(experiment.walk.ellipticity_split)
        self.assertEqual(experiment.format, 'jsonl')

    def test_zero_replicas_names_field_and_line(self):
        with self.assertRaises(ConfigurationError) as context:
            load_experiment(fixture('invalid_replicas.toml'))
        error = context.exception
        self.assertEqual(error.field, 'experiment.replicas')
        self.assertEqual(error.line, 11)
        self.assertIn('invalid_replicas.toml:11', str(error))

    def test_missing_required_key(self):
        values = base_values()
        del values['walk']['horizon']
        self.assert_field(values, 'walk.horizon')

    def test_unknown_section_and_key(self):
        values = base_values()
        values['plots'] = {}
        self.assert_field(values, 'plots')
        values = base_values()
        values['walk']['speed'] = 2
        self.assert_field(values, 'walk.speed')

    def test_wrong_types(self):
        values = base_values()
        values['walk']['dimension'] = 1.5
        self.assert_field(values, 'walk.dimension')
        values = base_values()
        values['walk']['horizon'] = True
        self.assert_field(values, 'walk.horizon')
        values = base_values()
        values['analysis'] = {'regen': 1}
        self.assert_field(values, 'analysis.regen')

    def test_value_checks(self):
        values = base_values()
        values['walk']['delta'] = -1.0
        self.assert_field(values, 'walk.delta')
        values = base_values()
        values['memory']['p'] = 1.5
        self.assert_field(values, 'memory.p')
        values = base_values()
        values['memory'] = {'family': 'poisson'}
        self.assert_field(values, 'memory.family')
        values = base_values()
        values['experiment']['format'] = 'xml'
        self.assert_field(values, 'experiment.format')
        values = base_values()
        values['experiment']['master_seed'] = -1
        self.assert_field(values, 'experiment.master_seed')
        values = base_values()
        values['experiment']['checkpoints'] = [0, 30]
        self.assert_field(values, 'experiment.checkpoints')

    def test_analysis_checks(self):
        values = base_values()
        values['analysis'] = {'tail': True}
        self.assert_field(values, 'analysis.tail')
        values = base_values()
        values['experiment']['checkpoints'] = [0, 10]
        values['analysis'] = {'clt': True, 'clt_step': 5}
        self.assert_field(values, 'analysis.clt_step')
        values = base_values()
        values['analysis'] = {'clt': True}
        self.assert_field(values, 'analysis.clt')
        values['experiment']['checkpoints'] = [0]
        self.assert_field(values, 'analysis.clt')
        values['experiment']['checkpoints'] = [0, 20]
        self.assertTrue(ExperimentConfig(values).analysis.clt)
        values = base_values()
        values['walk']['engine'] = 'orrw'
        values['analysis'] = {'regen': True}
        self.assert_field(values, 'analysis.regen')

    def test_batched(self):
        values = base_values()
        values['walk']['batched'] = True
        self.assertTrue(ExperimentConfig(values).walk.batched)
        self.assertFalse(ExperimentConfig(base_values()).walk.batched)
        values['walk']['engine'] = 'orrw'
        self.assert_field(values, 'walk.batched')
        values = base_values()
        values['walk']['batched'] = 'yes'
        self.assert_field(values, 'walk.batched')

    def test_unknown_kernel(self):
        values = base_values()
        values['walk']['engine'] = 'kernel'
        values['kernel'] = {'name': 'gaussian'}
        self.assert_field(values, 'kernel.name')

    def test_overrides(self):
        experiment = load_experiment(fixture('minimal.toml'))
        changed = experiment.with_overrides(seed=5, output_format='jsonl',
                                            workers=2, output='elsewhere')
        self.assertEqual(changed.master_seed, 5)
        self.assertEqual(changed.format, 'jsonl')
        self.assertEqual(changed.workers, 2)
        self.assertEqual(changed.output, 'elsewhere')
        self.assertEqual(experiment.master_seed, 20240611)

    def test_to_dict_round_trip(self):
        experiment = load_experiment(fixture('minimal.toml')).with_overrides(
            workers=4, output='somewhere')
        values = experiment.to_dict()
        self.assertNotIn('workers', values['experiment'])
        self.assertNotIn('output', values['experiment'])
        self.assertEqual(values['experiment']['format'], 'csv')
        reloaded = ExperimentConfig.from_dict(values)
        self.assertEqual(reloaded.to_dict(), values)
        self.assertEqual(reloaded.walk.checkpoints,
                         experiment.walk.checkpoints)


class TestParsing(unittest.TestCase):

    def test_invalid_toml(self):
        with self.assertRaises(ConfigurationError):
            parse_toml('[walk\ndimension = 1')

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            load_experiment(fixture('absent.toml'))

    def test_locate(self):
        text = '[walk]\ndimension = 2\n\n[experiment]\n  replicas = 0\n'
        self.assertEqual(locate(text, 'experiment', 'replicas'), 5)
        self.assertEqual(locate(text, 'experiment', 'master_seed'), 4)
        self.assertEqual(locate(text, 'experiment', None), 4)
        self.assertIsNone(locate(text, 'memory', 'family'))
        self.assertIsNone(locate(None, 'walk', 'dimension'))


if __name__ == '__main__':
    unittest.main()
