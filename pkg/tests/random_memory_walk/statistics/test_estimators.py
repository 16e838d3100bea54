import unittest
import math
import numpy as np
from random_memory_walk.algorithm.exception import DomainError
from random_memory_walk.algorithm.exception import InsufficientDataError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.serialization.run_summary import RunSummary
from random_memory_walk.statistics.estimators import hill_tail_index
from random_memory_walk.statistics.estimators import ks_normal
from random_memory_walk.statistics.estimators import ks_two_sample
from random_memory_walk.statistics.estimators import mean_and_se
from random_memory_walk.statistics.estimators import msd_curve
from random_memory_walk.statistics.estimators import msd_linearity
from random_memory_walk.statistics.estimators import positions_at


class TestEstimators(unittest.TestCase):

    def setUp(self):
        self.ensemble = [
            RunSummary(0, (2, 0), [], checkpoints={0: (0, 0), 4: (2, 0)}),
            RunSummary(1, (0, 0), [4], checkpoints={0: (0, 0), 4: (0, 0)}),
            RunSummary(2, (1, 1), [], checkpoints={0: (0, 0), 4: (1, 1)})
        ]

    def test_mean_and_se(self):
        mean, se = mean_and_se([1, 2, 3])
        self.assertAlmostEqual(mean, 2.0)
        self.assertAlmostEqual(se, 1.0 / math.sqrt(3))
        self.assertEqual(mean_and_se([5]), (5.0, 0.0))
        with self.assertRaises(InsufficientDataError):
            mean_and_se([])

    def test_positions_at(self):
        np.testing.assert_array_equal(positions_at(self.ensemble, 4),
                                      [[2, 0], [0, 0], [1, 1]])
        np.testing.assert_array_equal(positions_at(self.ensemble, 0),
                                      np.zeros((3, 2)))
        with self.assertRaises(InsufficientDataError):
            positions_at(self.ensemble, 3)
        with self.assertRaises(InsufficientDataError):
            positions_at([], 4)

    def test_msd_curve(self):
        curve = msd_curve(self.ensemble, [0, 4])
        self.assertEqual(curve[0], (0, 0.0, 0.0))
        n, mean, se = curve[1]
        self.assertEqual(n, 4)
        self.assertAlmostEqual(mean, 2.0)
        self.assertAlmostEqual(se, math.sqrt(4.0 / 3.0))

    def test_msd_linearity(self):
        curve = [(10, 20.0, 1.0), (20, 40.0, 1.0), (30, 60.0, 1.0)]
        fit = msd_linearity(curve, 2)
        self.assertAlmostEqual(fit['slope'], 2.0)
        self.assertAlmostEqual(fit['intercept'], 0.0, places=8)
        self.assertAlmostEqual(fit['relative_residual'], 0.0, places=8)
        self.assertAlmostEqual(fit['diffusion'], 1.0)
        with self.assertRaises(InsufficientDataError):
            msd_linearity(curve, 2, n_min=25)

    def test_ks_two_sample(self):
        statistic, p_value = ks_two_sample([1, 2, 3], [1, 2, 3])
        self.assertEqual(statistic, 0.0)
        self.assertAlmostEqual(p_value, 1.0)
        statistic, p_value = ks_two_sample(np.arange(50), np.arange(50) + 100)
        self.assertEqual(statistic, 1.0)
        self.assertLess(p_value, 1e-6)
        with self.assertRaises(InsufficientDataError):
            ks_two_sample([], [1.0])

    def test_ks_normal(self):
        sample = np.random.default_rng(0).standard_normal(2000)
        _, p_value = ks_normal(sample)
        self.assertGreater(p_value, 1e-4)
        _, p_value = ks_normal(sample + 1.0)
        self.assertLess(p_value, 1e-6)

    def test_hill_tail_index_on_pareto_sample(self):
        sample = np.random.default_rng(1).pareto(2.0, 10**5) + 1.0
        estimate = hill_tail_index(sample, top_fraction=0.05)
        self.assertEqual(estimate.k, 5000)
        self.assertAlmostEqual(estimate.estimate, 2.0, delta=0.15)
        self.assertAlmostEqual(estimate.se,
                               estimate.estimate / math.sqrt(5000))
        self.assertTrue(estimate.heavy_tail)

    def test_hill_tail_index_on_bounded_sample(self):
        sample = np.random.default_rng(2).uniform(1.0, 2.0, 10**4)
        self.assertFalse(hill_tail_index(sample).heavy_tail)

    def test_hill_tail_index_errors(self):
        with self.assertRaises(DomainError):
            hill_tail_index([3, 3, 3, 3])
        with self.assertRaises(UsageError):
            hill_tail_index([0, 1, 2])
        with self.assertRaises(UsageError):
            hill_tail_index([1, 2, 3], top_fraction=0.9)
        with self.assertRaises(InsufficientDataError):
            hill_tail_index([2])


if __name__ == '__main__':
    unittest.main()
