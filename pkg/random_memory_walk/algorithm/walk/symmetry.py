"""
Lattice symmetries fixing a site: the 2^d d! signed permutations of the
axes, applied around a center.
"""
from itertools import permutations, product
from random_memory_walk.algorithm.lattice import canonical_edge


class LatticeSymmetry(object):
    """
    g(z) = center + S P (z - center), P an axis permutation, S a diagonal
    of signs.
    """

    def __init__(self, permutation, signs):
        self._permutation = tuple(permutation)
        self._signs = tuple(signs)

    @property
    def is_identity(self):
        return (self._permutation == tuple(range(len(self._permutation)))
                and all(s == 1 for s in self._signs))

    def apply(self, z, center):
        relative = [a - c for a, c in zip(z, center)]
        return tuple(center[i] + self._signs[i]
                     * relative[self._permutation[i]]
                     for i in range(len(center)))

    def apply_edge(self, edge, center):
        a, b = edge.endpoints()
        return canonical_edge(self.apply(a, center), self.apply(b, center))

    def apply_window(self, window, center):
        return frozenset(self.apply_edge(e, center) for e in window)

    def __repr__(self):
        return 'LatticeSymmetry(permutation={}, signs={})'.format(
            self._permutation, self._signs)


def lattice_symmetries(dimension):
    """All 2^d d! symmetries, identity first."""
    result = []
    for permutation in permutations(range(dimension)):
        for signs in product((1, -1), repeat=dimension):
            result.append(LatticeSymmetry(permutation, signs))
    return result


def translate(z, shift):
    return tuple(a + b for a, b in zip(z, shift))


def translate_window(window, shift):
    return frozenset(canonical_edge(translate(a, shift), translate(b, shift))
                     for a, b in (e.endpoints() for e in window))
