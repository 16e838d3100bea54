"""
This module defines the geometry of the d-dimensional integer lattice:
sites, neighbor enumeration and canonical undirected edges.

Sites are plain tuples of ints so that they hash fast and compare by value.
"""
from collections import namedtuple
from random_memory_walk.algorithm.exception import UsageError


class Edge(namedtuple('Edge', ['base', 'axis'])):
    """
    Undirected nearest-neighbor edge {base, base + unit(axis)}.
    `base` is the endpoint with the smaller coordinate along `axis`.
    """
    __slots__ = ()

    def endpoints(self):
        other = list(self.base)
        other[self.axis] += 1
        return self.base, tuple(other)


def origin(dimension):
    return (0,) * dimension


def neighbors(x):
    """
    Returns the 2d nearest neighbors of site `x` in the fixed order
    axis 0 minus, axis 0 plus, axis 1 minus, ...
    """
    result = []
    for axis in range(len(x)):
        minus = list(x)
        minus[axis] -= 1
        plus = list(x)
        plus[axis] += 1
        result.append(tuple(minus))
        result.append(tuple(plus))
    return result


def canonical_edge(x, y):
    """
    Arguments
    ---------
    x, y : tuple of int
        Two sites at L1 distance exactly 1.

    Returns
    -------
    Edge
        The same edge for (x, y) and (y, x).
    """
    if len(x) != len(y):
        raise UsageError('Sites {} and {} have different dimensions'.format(
            x, y))
    axis = None
    for index, (a, b) in enumerate(zip(x, y)):
        if a == b:
            continue
        if axis is not None or abs(a - b) != 1:
            raise UsageError('Sites {} and {} are not adjacent'.format(x, y))
        axis = index
    if axis is None:
        raise UsageError('Sites {} and {} are not adjacent'.format(x, y))
    if x[axis] < y[axis]:
        return Edge(tuple(x), axis)
    return Edge(tuple(y), axis)


def incident_edges(x):
    """Edges between `x` and each of its neighbors, in neighbor order."""
    result = []
    for axis in range(len(x)):
        minus = list(x)
        minus[axis] -= 1
        result.append(Edge(tuple(minus), axis))
        result.append(Edge(tuple(x), axis))
    return result

