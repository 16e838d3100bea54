import unittest
import io
import json
import os
import shutil
import tempfile
from unittest.mock import patch
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.memory_law import BernoulliLaw
from random_memory_walk.command_line import exact_table
from random_memory_walk.command_line import main
from random_memory_walk.command_line import parse_params

FIXTURES = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                        'fixtures/experiments'))


def run_main(argv):
    with patch('sys.stdout', new_callable=io.StringIO) as stdout, \
            patch('sys.stderr', new_callable=io.StringIO) as stderr:
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self._temp_directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self._temp_directory)

    def test_parse_params(self):
        self.assertEqual(parse_params(['p=0.5', 'k=3']), {'p': 0.5, 'k': 3})
        self.assertEqual(parse_params(None), {})
        with self.assertRaises(UsageError):
            parse_params(['p'])
        with self.assertRaises(UsageError):
            parse_params(['p=half'])

    def test_exact_bernoulli(self):
        code, out, _ = run_main(['exact', '--family', 'bernoulli',
                                 '--params', 'p1=0.5', '--k-max', '4'])
        self.assertEqual(code, 0)
        self.assertIn('P[tau_1 = 1] = 0.5000000000', out)
        self.assertIn('E[K^4] finite: True', out)
        self.assertIn('tau1_pmf', out)

    def test_exact_table_rows(self):
        lines = exact_table(BernoulliLaw(0.5), 3)
        table = lines[lines.index(next(line for line in lines
                                       if line.startswith('P[S_1'))) + 1]
        rows = [row.split() for row in table.splitlines()[1:]]
        self.assertEqual([float(row[1]) for row in rows],
                         [1.0, 0.0, 0.0, 0.0])
        self.assertEqual([float(row[2]) for row in rows],
                         [1.0, 1.0, 1.0, 1.0])

    def test_exact_geometric(self):
        code, out, _ = run_main(['exact', '--family', 'geometric',
                                 '--params', 'p=0.5'])
        self.assertEqual(code, 0)
        self.assertIn('P[tau_1 = 1] = 0.2887880951', out)
        self.assertNotIn('tau1_pmf', out)

    def test_exact_infinite_mean(self):
        code, out, _ = run_main(['exact', '--family', 'pareto',
                                 '--params', 'alpha=0.8'])
        self.assertEqual(code, 0)
        self.assertIn('P[tau_1<inf]=0 regime', out)
        self.assertIn('E[K^1] finite: False', out)

    def test_exact_pareto_close_to_one(self):
        code, out, _ = run_main(['exact', '--family', 'pareto',
                                 '--params', 'alpha=1.02'])
        self.assertEqual(code, 0)
        self.assertIn('E[K^1] finite: True', out)
        self.assertIn('P[S_1 = k | S_1 < inf]', out)

    def test_exact_with_samples(self):
        code, out, _ = run_main(['exact', '--family', 'bernoulli',
                                 '--params', 'p1=0.5', '--samples', '2000',
                                 '--seed', '1'])
        self.assertEqual(code, 0)
        self.assertIn('Monte Carlo P[tau_1 = 1]', out)

    def test_exact_unknown_family(self):
        code, _, err = run_main(['exact', '--family', 'poisson'])
        self.assertEqual(code, 1)
        self.assertTrue(err.startswith('error: '))

    def test_run_and_analyze(self):
        output = os.path.join(self._temp_directory, 'run')
        code, out, _ = run_main(['run', os.path.join(FIXTURES,
                                                     'minimal.toml'),
                                 '--output', output, '--seed', '9',
                                 '--format', 'jsonl'])
        self.assertEqual(code, 0)
        self.assertIn('8 replicas written', out)
        with open(os.path.join(output, 'config.json')) as file:
            config = json.load(file)
        self.assertEqual(config['experiment']['master_seed'], 9)
        self.assertTrue(os.path.isfile(os.path.join(output, 'msd.jsonl')))

        code, out, _ = run_main(['analyze', output])
        self.assertEqual(code, 0)
        self.assertTrue(os.path.isfile(os.path.join(output, 'analysis',
                                                    'summary.json')))

    def test_run_invalid_config(self):
        filepath = os.path.join(FIXTURES, 'invalid_replicas.toml')
        code, _, err = run_main(['run', filepath])
        self.assertEqual(code, 1)
        self.assertIn('invalid_replicas.toml:11', err)
        self.assertIn('experiment.replicas', err)

    def test_analyze_empty_directory(self):
        code, _, err = run_main(['analyze', self._temp_directory])
        self.assertEqual(code, 1)
        self.assertIn('config.json', err)
        self.assertIn('replicas.jsonl', err)

    def test_sweep(self):
        output = os.path.join(self._temp_directory, 'sweep')
        code, out, _ = run_main(['sweep', os.path.join(FIXTURES, 'grid.toml'),
                                 '--output', output])
        self.assertEqual(code, 0)
        self.assertIn('4 cells completed', out)
        with open(os.path.join(output, 'manifest.json')) as file:
            manifest = json.load(file)
        self.assertEqual(len(manifest['cells']), 4)
        self.assertEqual(len([name for name in os.listdir(output)
                              if os.path.isdir(os.path.join(output, name))]),
                         4)

    def test_sweep_failure_sets_exit_code(self):
        output = os.path.join(self._temp_directory, 'sweep')
        with patch('random_memory_walk.experiment.sweep.run_experiment',
                   side_effect=UsageError('broken cell')):
            code, _, err = run_main(['sweep', os.path.join(FIXTURES,
                                                           'grid.toml'),
                                     '--output', output])
        self.assertEqual(code, 1)
        self.assertIn('4 of 4 cells failed', err)


if __name__ == '__main__':
    unittest.main()
