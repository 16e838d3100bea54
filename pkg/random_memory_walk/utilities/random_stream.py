"""
This module defines the random streams used by the simulation and the
normative seed derivation for replicas.
"""
import numpy as np

_MASK64 = 2**64 - 1


class SplitMix64(object):
    """
    Port of the splitmix64 generator
    (http://xoshiro.di.unimi.it/splitmix64.c).

    Used only to turn (master seed, replica index) into well mixed 64-bit
    seeds; the simulation itself draws from numpy's PCG64.
    """

    def __init__(self, seed=0):
        self._state = int(seed) & _MASK64

    def next(self):
        self._state = (self._state + 0x9e3779b97f4a7c15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xbf58476d1ce4e5b9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94d049bb133111eb) & _MASK64
        return z ^ (z >> 31)


def replica_seed(master_seed, replica):
    """First SplitMix64 output for state master_seed XOR replica."""
    return SplitMix64((int(master_seed) & _MASK64) ^ int(replica)).next()


def pcg64_generator(seed):
    """The numpy Generator every stream of `seed` draws from."""
    return np.random.Generator(np.random.PCG64(int(seed)))


class UniformStream(object):
    """
    Buffered stream of uniform doubles in [0, 1).

    Uniforms are drawn from a PCG64 generator in blocks; block size does
    not change the sequence, only how often numpy is called.
    """

    def __init__(self, seed, block_size=4096):
        self._generator = pcg64_generator(seed)
        self._block_size = block_size
        self._buffer = []
        self._position = 0
        self._consumed = 0

    @classmethod
    def for_replica(cls, master_seed, replica, block_size=4096):
        return cls(replica_seed(master_seed, replica), block_size=block_size)

    def uniform(self):
        if self._position >= len(self._buffer):
            self._buffer = self._generator.random(self._block_size).tolist()
            self._position = 0
        value = self._buffer[self._position]
        self._position += 1
        self._consumed += 1
        return value

    def uniforms(self, size):
        """Array of `size` uniforms continuing the same sequence."""
        return np.array([self.uniform() for _ in range(size)]) if size < 64 \
            else self._bulk(size)

    def _bulk(self, size):
        head = self._buffer[self._position:]
        self._buffer = []
        self._position = 0
        remaining = size - len(head)
        if remaining <= 0:
            self._buffer = head
            values = np.array(head[:size])
            self._position = size
            self._consumed += size
            return values
        tail = self._generator.random(remaining)
        self._consumed += size
        return np.concatenate([np.array(head, dtype=float), tail])

    @property
    def consumed(self):
        """Number of uniforms handed out so far."""
        return self._consumed

    @property
    def generator(self):
        return self._generator
