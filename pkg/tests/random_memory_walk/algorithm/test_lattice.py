import unittest
import numpy as np
from random_memory_walk.algorithm.exception import UsageError
from random_memory_walk.algorithm.lattice import Edge
from random_memory_walk.algorithm.lattice import canonical_edge
from random_memory_walk.algorithm.lattice import incident_edges
from random_memory_walk.algorithm.lattice import neighbors


def distance(x, y):
    return int(np.abs(np.subtract(x, y)).sum())


class TestLattice(unittest.TestCase):

    def test_neighbors_one_dimension(self):
        self.assertEqual(neighbors((0,)), [(-1,), (1,)])

    def test_neighbors_two_dimensions(self):
        self.assertEqual(neighbors((0, 0)),
                         [(-1, 0), (1, 0), (0, -1), (0, 1)])

    def test_neighbors_are_distinct_and_adjacent(self):
        x = (1, 2, 3)
        result = neighbors(x)
        self.assertEqual(len(result), 6)
        self.assertEqual(len(set(result)), 6)
        for y in result:
            self.assertEqual(distance(x, y), 1)

    def test_canonical_edge(self):
        self.assertEqual(canonical_edge((0,), (1,)), Edge((0,), 0))
        self.assertEqual(canonical_edge((1,), (0,)), Edge((0,), 0))
        self.assertEqual(canonical_edge((0, 0), (0, -1)), Edge((0, -1), 1))

    def test_canonical_edge_is_symmetric_and_idempotent(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            x = tuple(int(c) for c in rng.integers(-5, 6, size=3))
            for y in neighbors(x):
                edge = canonical_edge(x, y)
                self.assertEqual(edge, canonical_edge(y, x))
                a, b = edge.endpoints()
                self.assertEqual(distance(a, b), 1)
                self.assertEqual(canonical_edge(a, b), edge)

    def test_canonical_edge_rejects_non_adjacent_sites(self):
        with self.assertRaises(UsageError):
            canonical_edge((0, 0), (1, 1))
        with self.assertRaises(UsageError):
            canonical_edge((0,), (2,))
        with self.assertRaises(UsageError):
            canonical_edge((0,), (0,))

    def test_incident_edges_follow_neighbor_order(self):
        x = (2, -1)
        self.assertEqual(incident_edges(x),
                         [canonical_edge(x, y) for y in neighbors(x)])

    def test_endpoints(self):
        self.assertEqual(Edge((0, -1), 1).endpoints(), ((0, -1), (0, 0)))
