import unittest
import math
import numpy as np
from scipy import stats
from random_memory_walk.algorithm.exception import DomainError
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.memory_law import BernoulliLaw
from random_memory_walk.algorithm.memory_law import DegenerateLaw
from random_memory_walk.algorithm.memory_law import GeometricLaw
from random_memory_walk.algorithm.memory_law import ParetoLaw
from random_memory_walk.algorithm.memory_law import SplitMemoryLaw
from random_memory_walk.algorithm.memory_law import UniformLaw
from random_memory_walk.algorithm.memory_law import memory_law
from random_memory_walk.algorithm.memory_law import memory_law_from_dict
from random_memory_walk.algorithm.memory_law import prob_regen_at_fixed_time
from random_memory_walk.algorithm.memory_law import s1_conditional_pmf
from random_memory_walk.utilities.random_stream import UniformStream

GEOMETRIC_HALF_PRODUCT = 0.2887880950866024


class TestMemoryLaw(unittest.TestCase):

    def test_degenerate_zero(self):
        law = DegenerateLaw(0)
        stream = UniformStream(1)
        self.assertTrue(all(law.sample_k(stream) == 0 for _ in range(100)))
        self.assertEqual(law.cdf(0), 1.0)
        self.assertEqual(law.cdf(10), 1.0)
        self.assertEqual(law.prob_regen_at_fixed_time(), 1.0)

    def test_geometric_cdf(self):
        law = GeometricLaw(0.5)
        self.assertAlmostEqual(law.cdf(0), 0.5)
        self.assertAlmostEqual(law.cdf(1), 0.75)
        self.assertEqual(law.cdf(-1), 0.0)

    def test_pareto_cdf(self):
        law = ParetoLaw(2.5)
        self.assertAlmostEqual(law.cdf(0), 1 - 2 ** -2.5)
        self.assertAlmostEqual(law.cdf(0), 0.8232, places=4)
        self.assertAlmostEqual(law.tail(1), 3 ** -2.5)

    def test_tail_is_nonincreasing(self):
        for law in (GeometricLaw(0.7), UniformLaw(5), ParetoLaw(1.5),
                    BernoulliLaw(0.3), DegenerateLaw(4)):
            tails = [law.tail(i) for i in range(-1, 40)]
            self.assertTrue(all(b <= a for a, b in zip(tails, tails[1:])))

    def test_pmf_sums_to_one(self):
        for law in (GeometricLaw(0.5), UniformLaw(7), BernoulliLaw(0.2),
                    DegenerateLaw(3)):
            total = sum(law.pmf(k) for k in range(200))
            self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_moment_finite(self):
        self.assertTrue(GeometricLaw(0.5).moment_finite(3))
        self.assertTrue(ParetoLaw(2.5).moment_finite(2))
        self.assertFalse(ParetoLaw(2.5).moment_finite(3))
        with self.assertRaises(UsageError):
            GeometricLaw(0.5).moment_finite(0)

    def test_prob_regen_at_fixed_time(self):
        self.assertAlmostEqual(prob_regen_at_fixed_time(DegenerateLaw(0)),
                               1.0)
        self.assertAlmostEqual(prob_regen_at_fixed_time(BernoulliLaw(0.5)),
                               0.5)
        self.assertAlmostEqual(prob_regen_at_fixed_time(GeometricLaw(0.5)),
                               GEOMETRIC_HALF_PRODUCT, delta=1e-10)

    def test_prob_regen_positive_iff_finite_mean(self):
        self.assertEqual(ParetoLaw(0.8).prob_regen_at_fixed_time(), 0.0)
        self.assertEqual(ParetoLaw(1.0).prob_regen_at_fixed_time(), 0.0)
        self.assertGreater(ParetoLaw(2.5).prob_regen_at_fixed_time(), 0.0)
        self.assertGreater(ParetoLaw(1.2).prob_regen_at_fixed_time(), 0.0)

    def test_pareto_heavy_product_matches_direct_truncation(self):
        law = ParetoLaw(1.5)
        direct = math.exp(np.sum(np.log1p(-law.tails(10**6))))
        # the factors beyond 10^6 only remove about 2e-3 of mass
        self.assertAlmostEqual(law.prob_regen_at_fixed_time() / direct, 1.0,
                               delta=5e-3)
        self.assertLess(law.prob_regen_at_fixed_time(), direct)

    def test_pareto_near_one_product_stays_finite(self):
        for alpha in (1.02, 1.05):
            law = ParetoLaw(alpha)
            self.assertIsNone(law.truncation_index(1e-12, limit=10**6))
            p = law.prob_regen_at_fixed_time()
            self.assertTrue(math.isfinite(p))
            self.assertGreater(p, 0.0)
            direct = math.exp(np.sum(np.log1p(-law.tails(10**5))))
            self.assertLess(p, direct)
            table = law.s1_conditional_pmf_table(20, regen_probability=p)
            self.assertTrue(np.all(np.isfinite(table)))

    def test_unreachable_truncation_mass(self):
        with self.assertRaises(DomainError):
            ParetoLaw(1.02).truncation_index(1e-12)
        self.assertEqual(GeometricLaw(0.5).truncation_index(0.3), 1)

    def test_s1_conditional_pmf_bernoulli(self):
        law = BernoulliLaw(0.5)
        self.assertAlmostEqual(s1_conditional_pmf(law, 0), 1.0)
        self.assertAlmostEqual(s1_conditional_pmf(law, 1), 0.0)

    def test_s1_conditional_pmf_sums_to_one(self):
        law = GeometricLaw(0.5)
        total = sum(law.s1_conditional_pmf(k) for k in range(61))
        self.assertAlmostEqual(total, 1.0, delta=1e-9)
        table = law.s1_conditional_pmf_table(60)
        np.testing.assert_almost_equal(
            table, [law.s1_conditional_pmf(k) for k in range(61)],
            decimal=12)

    def test_s1_conditional_pmf_is_sandwiched(self):
        law = GeometricLaw(0.6)
        c0, c1 = law.s1_bounds()
        for k in range(30):
            value = law.s1_conditional_pmf(k)
            self.assertLessEqual(c0 * law.tail(k), value + 1e-15)
            self.assertLessEqual(value, c1 * law.tail(k) + 1e-15)

    def test_s1_conditional_pmf_degenerate_conditioning(self):
        with self.assertRaises(DomainError):
            DegenerateLaw(0).s1_conditional_pmf(0)
        with self.assertRaises(DomainError):
            ParetoLaw(0.8).s1_conditional_pmf(0)

    def test_bernoulli_sampling_chi_square(self):
        law = BernoulliLaw(0.5)
        draws = law.sample(UniformStream(11), 10**5)
        counts = np.bincount(draws, minlength=2)
        _, p_value = stats.chisquare(counts)
        self.assertGreater(p_value, 0.01)

    def test_geometric_sampling_matches_pmf(self):
        law = GeometricLaw(0.5)
        draws = law.sample(UniformStream(5), 10**5)
        counts = np.bincount(np.minimum(draws, 8), minlength=9)
        expected = [law.pmf(k) for k in range(8)]
        expected.append(law.tail(7))
        _, p_value = stats.chisquare(counts, np.array(expected) * 10**5)
        self.assertGreater(p_value, 0.01)

    def test_pareto_sampling_tail(self):
        law = ParetoLaw(2.5)
        draws = law.sample_array(np.random.default_rng(3), 10**6)
        for k in (1, 3, 9):
            expected = (1.0 + k) ** -2.5
            se = np.sqrt(expected * (1 - expected) / 10**6)
            self.assertAlmostEqual(np.mean(draws >= k), expected,
                                   delta=5 * se)

    def test_scalar_and_vector_sampling_agree(self):
        for law in (GeometricLaw(0.4), UniformLaw(6), ParetoLaw(2.0),
                    BernoulliLaw(0.3)):
            stream = UniformStream(21)
            scalar = [law.sample_k(stream) for _ in range(500)]
            vector = law.sample(UniformStream(21), 500)
            np.testing.assert_array_equal(scalar, vector)

    def test_confirmation_window(self):
        law = GeometricLaw(0.5)
        window = law.confirmation_window(1e-6)
        self.assertLess(law.tail(window), 1e-6)
        self.assertGreaterEqual(law.tail(window - 1), 1e-6)
        self.assertEqual(DegenerateLaw(0).confirmation_window(), 0)
        self.assertEqual(BernoulliLaw(0.5).confirmation_window(), 1)

    def test_split_law(self):
        law = SplitMemoryLaw(DegenerateLaw(3), 0.25)
        self.assertAlmostEqual(law.cdf(0), 0.25)
        self.assertAlmostEqual(law.tail(2), 0.75)
        self.assertEqual(law.tail(3), 0.0)
        self.assertAlmostEqual(law.prob_regen_at_fixed_time(), 0.25 ** 3)

    def test_memory_law_factory(self):
        self.assertEqual(memory_law('geometric', p=0.5), GeometricLaw(0.5))
        self.assertEqual(memory_law_from_dict({'family': 'uniform', 'm': 3}),
                         UniformLaw(3))
        with self.assertRaises(UsageError):
            memory_law('poisson', lam=1.0)
        with self.assertRaises(UsageError):
            memory_law('geometric', q=0.5)
        with self.assertRaises(UsageError):
            memory_law('geometric', p=1.5)
