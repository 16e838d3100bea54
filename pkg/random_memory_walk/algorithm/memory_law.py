"""
This module defines the distribution families of the i.i.d. memory lengths
K_0, K_1, ... together with the exact renewal quantities derived from them.

Common code (truncated products, the conditional law of the first
excursion S_1, confirmation windows) lives in the abstract base class;
each family only supplies its cdf, tail, inverse cdf and moment criterion.
"""
from abc import ABC, abstractmethod
import math
import numpy as np
from scipy.special import zeta
from random_memory_walk.algorithm.exception import DomainError, UsageError
from random_memory_walk.configuration import default

# Above this many factors the truncated product is not evaluated term by term.
_DIRECT_PRODUCT_LIMIT = 10**6
# Integers past this are no longer exact as floats.
_SEARCH_CEILING = 2**53


class AbstractMemoryLaw(ABC):
    """
    Law of a nonnegative integer memory length K.

    Instances are immutable; sampling only advances the caller's stream.
    """

    family = None

    @abstractmethod
    def cdf(self, i):
        pass

    @abstractmethod
    def tail(self, i):
        pass

    @abstractmethod
    def _inverse_cdf_array(self, u):
        pass

    @abstractmethod
    def tail_sum(self, i):
        """Sum of tail(j) over j > i."""

    @abstractmethod
    def mean(self):
        pass

    @abstractmethod
    def params(self):
        pass

    def moment_finite(self, m):
        if int(m) != m or m < 1:
            raise UsageError('Moment order must be a positive integer, '
                             'got {}'.format(m))
        return True

    @property
    def support_max(self):
        """Largest value K can take, None for unbounded support."""
        return None

    def pmf(self, k):
        if k < 0:
            return 0.0
        return self.tail(k - 1) - self.tail(k)

    def sample_k(self, stream):
        """Draws one K from a single uniform of `stream` (inverse cdf)."""
        return int(self.from_uniforms(stream.uniform()))

    def sample(self, stream, size):
        """Vectorized draws; consumes exactly `size` uniforms of `stream`."""
        u = stream.uniforms(size)
        return self._inverse_cdf_array(u).astype(np.int64)

    def from_uniforms(self, u):
        """K's for an array of uniforms of any shape, by inverse cdf."""
        u = np.asarray(u, dtype=float)
        return self._inverse_cdf_array(u.ravel()).astype(np.int64).reshape(
            u.shape)

    def sample_array(self, generator, shape):
        """Vectorized draws straight from a numpy Generator."""
        u = generator.random(shape)
        return self._inverse_cdf_array(u.ravel()).reshape(shape)

    def tails(self, stop):
        """Array of tail(i) for i in [0, stop)."""
        return np.array([self.tail(i) for i in range(stop)], dtype=float)

    def truncation_index(self, mass=None, limit=None):
        """
        Smallest I >= 0 with sum_{i>I} tail(i) < mass.

        With `limit`, returns None as soon as I is known to exceed it.
        """
        mass = default('truncation_mass', mass)
        if not self.moment_finite(1):
            raise DomainError('Law {} has infinite mean; its tail sum never '
                              'drops below {}'.format(self, mass))
        ceiling = _SEARCH_CEILING if limit is None else limit
        upper = 1
        while self.tail_sum(upper) >= mass:
            if upper > ceiling:
                if limit is not None:
                    return None
                raise DomainError(
                    'Tail sum of {} is still above {} at index {}'.format(
                        self, mass, upper))
            upper *= 2
        lower = 0
        if self.tail_sum(lower) < mass:
            return 0
        while upper - lower > 1:
            middle = (lower + upper) // 2
            if self.tail_sum(middle) < mass:
                upper = middle
            else:
                lower = middle
        return upper

    def confirmation_window(self, tolerance=None):
        """Smallest W >= 0 with tail(W) < tolerance."""
        tolerance = default('confirmation_tolerance', tolerance)
        if self.tail(0) < tolerance:
            return 0
        upper = 1
        while self.tail(upper) >= tolerance:
            upper *= 2
        lower = 0
        while upper - lower > 1:
            middle = (lower + upper) // 2
            if self.tail(middle) < tolerance:
                upper = middle
            else:
                lower = middle
        return upper

    def prob_regen_at_fixed_time(self, truncation_mass=None,
                                 product_error=None):
        """
        P[tau_1 = 1] = prod_{i>=0} P[K <= i].

        The product is truncated where the remaining tail mass is below
        `truncation_mass` (tightened to half of `product_error` if needed);
        it is 0 exactly when E[K] is infinite.
        """
        if not self.moment_finite(1):
            return 0.0
        mass = min(default('truncation_mass', truncation_mass),
                   0.5 * default('product_error', product_error))
        if self.cdf(0) <= 0.0:
            return 0.0
        stop = self.truncation_index(mass, limit=_DIRECT_PRODUCT_LIMIT)
        if stop is None or stop > _DIRECT_PRODUCT_LIMIT:
            return math.exp(self._log_product_with_remainder())
        tails = self.tails(stop + 1)
        if np.any(tails >= 1.0):
            return 0.0
        return float(np.exp(np.sum(np.log1p(-tails))))

    def _log_product_with_remainder(self):
        raise DomainError('No closed-form tail remainder for {}'.format(self))

    def s1_conditional_pmf(self, k, regen_probability=None):
        """
        P[S_1 = k | S_1 < infinity]
        = prod_{i<k} (1 - tail(i)) * tail(k) / (1 - P[tau_1 = 1]).
        """
        if k < 0:
            return 0.0
        p = self._nondegenerate_regen_probability(regen_probability)
        if k > 0:
            prefix = self.tails(k)
            if np.any(prefix >= 1.0):
                return 0.0
            log_prefix = float(np.sum(np.log1p(-prefix)))
        else:
            log_prefix = 0.0
        return math.exp(log_prefix) * self.tail(k) / (1.0 - p)

    def s1_conditional_pmf_table(self, k_max, regen_probability=None):
        """Array of s1_conditional_pmf(k) for k = 0..k_max."""
        p = self._nondegenerate_regen_probability(regen_probability)
        tails = self.tails(k_max + 1)
        with np.errstate(divide='ignore'):
            prefix = np.concatenate([[0.0], np.cumsum(np.log1p(-tails[:-1]))])
        return np.exp(prefix) * tails / (1.0 - p)

    def s1_bounds(self, regen_probability=None):
        """
        Constants (c0, c1) with c0 tail(k) <= P[S_1=k | S_1<inf] <= c1 tail(k).
        """
        p = self._nondegenerate_regen_probability(regen_probability)
        return p / (1.0 - p), 1.0 / (1.0 - p)

    def _nondegenerate_regen_probability(self, regen_probability=None):
        if regen_probability is None:
            regen_probability = self.prob_regen_at_fixed_time()
        if not 0.0 < regen_probability < 1.0:
            raise DomainError(
                'Conditioning on S_1 < infinity is degenerate for {}: '
                'P[tau_1 = 1] = {}'.format(self, regen_probability))
        return regen_probability

    def to_dict(self):
        result = {'family': self.family}
        result.update(self.params())
        return result

    def __eq__(self, other):
        return (type(self) is type(other)
                and self.to_dict() == other.to_dict())

    def __hash__(self):
        return hash(tuple(sorted(self.to_dict().items())))

    def __repr__(self):
        params = ', '.join('{}={}'.format(key, value) for key, value
                           in sorted(self.params().items()))
        return '{}({})'.format(self.family, params)


class DegenerateLaw(AbstractMemoryLaw):

    family = 'degenerate'

    def __init__(self, k=0):
        if int(k) != k or k < 0:
            raise UsageError('degenerate law needs an integer k >= 0, '
                             'got {}'.format(k))
        self._k = int(k)

    def cdf(self, i):
        return 1.0 if i >= self._k else 0.0

    def tail(self, i):
        return 0.0 if i >= self._k else 1.0

    def _inverse_cdf_array(self, u):
        return np.full(len(u), self._k, dtype=np.int64)

    def tail_sum(self, i):
        return float(max(self._k - 1 - i, 0))

    def mean(self):
        return float(self._k)

    @property
    def support_max(self):
        return self._k

    def params(self):
        return {'k': self._k}


class BernoulliLaw(AbstractMemoryLaw):
    """K in {0, 1} with P[K = 1] = p1."""

    family = 'bernoulli'

    def __init__(self, p1=0.5):
        if not 0.0 <= p1 <= 1.0:
            raise UsageError('bernoulli law needs p1 in [0, 1], '
                             'got {}'.format(p1))
        self._p1 = float(p1)

    def cdf(self, i):
        if i < 0:
            return 0.0
        return 1.0 - self._p1 if i == 0 else 1.0

    def tail(self, i):
        if i < 0:
            return 1.0
        return self._p1 if i == 0 else 0.0

    def _inverse_cdf_array(self, u):
        return (u >= 1.0 - self._p1).astype(np.int64)

    def tail_sum(self, i):
        return self._p1 if i < 0 else 0.0

    def mean(self):
        return self._p1

    @property
    def support_max(self):
        return 1 if self._p1 > 0 else 0

    def params(self):
        return {'p1': self._p1}


class GeometricLaw(AbstractMemoryLaw):
    """P[K = k] = (1 - p) p^k, k >= 0, so that tail(i) = p^(i+1)."""

    family = 'geometric'

    def __init__(self, p=0.5):
        if not 0.0 <= p < 1.0:
            raise UsageError('geometric law needs p in [0, 1), '
                             'got {}'.format(p))
        self._p = float(p)

    def cdf(self, i):
        if i < 0:
            return 0.0
        return 1.0 - self._p ** (i + 1)

    def tail(self, i):
        if i < 0:
            return 1.0
        return self._p ** (i + 1)

    def tails(self, stop):
        return self._p ** np.arange(1, stop + 1, dtype=float)

    def _inverse_cdf_array(self, u):
        if self._p == 0.0:
            return np.zeros(len(u), dtype=np.int64)
        return np.floor(np.log1p(-u) / math.log(self._p)).astype(np.int64)

    def tail_sum(self, i):
        if self._p == 0.0:
            return 0.0
        return self._p ** (max(i, -1) + 2) / (1.0 - self._p)

    def mean(self):
        return self._p / (1.0 - self._p)

    def params(self):
        return {'p': self._p}


class UniformLaw(AbstractMemoryLaw):
    """K uniform on {0, 1, ..., m}."""

    family = 'uniform'

    def __init__(self, m=1):
        if int(m) != m or m < 0:
            raise UsageError('uniform law needs an integer m >= 0, '
                             'got {}'.format(m))
        self._m = int(m)

    def cdf(self, i):
        if i < 0:
            return 0.0
        return min(i + 1, self._m + 1) / (self._m + 1.0)

    def tail(self, i):
        if i < 0:
            return 1.0
        return max(self._m - i, 0) / (self._m + 1.0)

    def _inverse_cdf_array(self, u):
        return np.minimum(np.floor(u * (self._m + 1)),
                          self._m).astype(np.int64)

    def tail_sum(self, i):
        start = max(i + 1, 0)
        count = max(self._m - start, 0)
        # sum_{j=start}^{m-1} (m - j) / (m + 1)
        return count * (count + 1) / 2.0 / (self._m + 1.0)

    def mean(self):
        return self._m / 2.0

    @property
    def support_max(self):
        return self._m

    def params(self):
        return {'m': self._m}


class ParetoLaw(AbstractMemoryLaw):
    """
    Polynomial tail P[K >= k] = (1 + k)^(-alpha), k >= 0.

    Equivalently tail(i) = P[K > i] = (2 + i)^(-alpha), which leaves
    P[K = 0] = 1 - 2^(-alpha) > 0.
    """

    family = 'pareto'

    def __init__(self, alpha=2.5):
        if not alpha > 0:
            raise UsageError('pareto law needs alpha > 0, '
                             'got {}'.format(alpha))
        self._alpha = float(alpha)

    def cdf(self, i):
        if i < 0:
            return 0.0
        return 1.0 - (2.0 + i) ** (-self._alpha)

    def tail(self, i):
        if i < 0:
            return 1.0
        return (2.0 + i) ** (-self._alpha)

    def tails(self, stop):
        return (2.0 + np.arange(stop, dtype=float)) ** (-self._alpha)

    def _inverse_cdf_array(self, u):
        # heavy tails can exceed the int64 range for u close to 1
        values = np.minimum(np.floor((1.0 - u) ** (-1.0 / self._alpha)),
                            2.0**62)
        return (values - 1).astype(np.int64)

    def moment_finite(self, m):
        super().moment_finite(m)
        return m < self._alpha

    def tail_sum(self, i):
        if self._alpha <= 1.0:
            return math.inf
        return float(zeta(self._alpha, max(i, -1) + 3))

    def tail_power_sum(self, power, start):
        """Sum of tail(i)^power over i >= start."""
        return float(zeta(power * self._alpha, start + 2))

    def _log_product_with_remainder(self):
        head = min(_DIRECT_PRODUCT_LIMIT, 10**5)
        log_product = float(np.sum(np.log1p(-self.tails(head))))
        # log(1 - t) = -sum_j t^j / j over the factors i >= head
        power = 1
        while True:
            term = self.tail_power_sum(power, head) / power
            log_product -= term
            if term < 1e-18 or power > 64:
                break
            power += 1
        return log_product

    def mean(self):
        if self._alpha <= 1.0:
            return math.inf
        return float(zeta(self._alpha, 2))

    def params(self):
        return {'alpha': self._alpha}


class SplitMemoryLaw(AbstractMemoryLaw):
    """
    Effective memory law of a walk run with the ellipticity split: with
    probability q the step is a uniform one and its memory counts as 0,
    otherwise the memory is drawn from `base`.

    tail'(i) = (1 - q) tail(i).
    """

    family = 'split'

    def __init__(self, base, q):
        if not 0.0 <= q <= 1.0:
            raise UsageError('split probability must lie in [0, 1], '
                             'got {}'.format(q))
        self._base = base
        self._q = float(q)

    @property
    def base(self):
        return self._base

    def cdf(self, i):
        if i < 0:
            return 0.0
        return 1.0 - self.tail(i)

    def tail(self, i):
        if i < 0:
            return 1.0
        return (1.0 - self._q) * self._base.tail(i)

    def tails(self, stop):
        return (1.0 - self._q) * self._base.tails(stop)

    def _inverse_cdf_array(self, u):
        inner = np.clip((u - self._q) / max(1.0 - self._q, 1e-300), 0.0,
                        np.nextafter(1.0, 0.0))
        values = self._base._inverse_cdf_array(inner)
        values[u < self._q] = 0
        return values

    def moment_finite(self, m):
        return self._base.moment_finite(m)

    def tail_sum(self, i):
        return (1.0 - self._q) * self._base.tail_sum(i)

    def _log_product_with_remainder(self):
        if not hasattr(self._base, 'tail_power_sum'):
            return super()._log_product_with_remainder()
        head = 10**5
        log_product = float(np.sum(np.log1p(-self.tails(head))))
        scale = 1.0 - self._q
        power = 1
        while True:
            term = scale ** power * self._base.tail_power_sum(
                power, head) / power
            log_product -= term
            if term < 1e-18 or power > 64:
                break
            power += 1
        return log_product

    def mean(self):
        return (1.0 - self._q) * self._base.mean()

    @property
    def support_max(self):
        return self._base.support_max

    def params(self):
        result = {'q': self._q}
        result.update({'base_' + key: value
                       for key, value in self._base.to_dict().items()})
        return result


FAMILIES = {
    DegenerateLaw.family: DegenerateLaw,
    BernoulliLaw.family: BernoulliLaw,
    GeometricLaw.family: GeometricLaw,
    UniformLaw.family: UniformLaw,
    ParetoLaw.family: ParetoLaw
}


def memory_law(family, **params):
    """
    Builds a memory law from its family name and parameters, e.g.
    memory_law('geometric', p=0.5).
    """
    try:
        law_class = FAMILIES[family]
    except KeyError:
        raise UsageError('Unknown memory family {!r}; expected one of '
                         '{}'.format(family, ', '.join(sorted(FAMILIES))))
    try:
        return law_class(**params)
    except TypeError:
        raise UsageError('Invalid parameters {} for memory family '
                         '{!r}'.format(sorted(params), family))


def memory_law_from_dict(values):
    values = dict(values)
    family = values.pop('family', None)
    if family is None:
        raise UsageError('Memory law description lacks a family')
    return memory_law(family, **values)


# Function forms of the memory law operations.

def sample_k(law, stream):
    return law.sample_k(stream)


def cdf(law, i):
    return law.cdf(i)


def moment_finite(law, m):
    return law.moment_finite(m)


def prob_regen_at_fixed_time(law, truncation_mass=None, product_error=None):
    return law.prob_regen_at_fixed_time(truncation_mass=truncation_mass,
                                        product_error=product_error)


def s1_conditional_pmf(law, k):
    return law.s1_conditional_pmf(k)
