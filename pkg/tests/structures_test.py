import unittest

import numpy as np

from arbor.model import Node
from arbor.structures import (
    BoundExceededError,
    DimensionMismatchError,
    DuplicatePointsError,
    FinitePoset,
    FiniteStructure,
    NonRealizableError,
    are_isomorphic,
    convex_extensions,
    convex_extensions_by_filter,
    enumerate_age_structures,
    find_isomorphisms,
    induced_structure,
    is_convex_extension,
    validate,
)


def antichain_with_c() -> FiniteStructure:
    return FiniteStructure.from_relations(3, c_triples=[(2, 0, 1)])


class TestStructures(unittest.TestCase):

    def test_age_counts(self):
        self.assertEqual([len(enumerate_age_structures(n)) for n in (1, 2, 3)], [1, 2, 6])
        self.assertEqual([len(enumerate_age_structures(n, reduce="full")) for n in (1, 2, 3)], [1, 2, 4])

    def test_age_structures_are_valid_and_distinct(self):
        for n in range(1, 5):
            structures = enumerate_age_structures(n, reduce="full")
            for structure in structures:
                self.assertTrue(validate(structure).is_valid(), str(structure))
            for i, first in enumerate(structures):
                for second in structures[i + 1:]:
                    self.assertFalse(are_isomorphic(first, second))

    def test_unknown_reduce_mode(self):
        with self.assertRaises(ValueError):
            enumerate_age_structures(2, reduce="tree")

    def test_validation(self):
        self.assertTrue(validate(FiniteStructure.chain(4)).is_valid())
        self.assertTrue(validate(antichain_with_c()).is_valid())
        self.assertTrue(validate(FiniteStructure.from_relations(3)).is_valid())
        report = validate(FiniteStructure.from_relations(3, less=[(0, 1), (0, 2)]))
        self.assertFalse(report.is_valid())
        self.assertEqual(report.violations[0].name, "up-set is a chain")
        report = validate(FiniteStructure.from_relations(3, less=[(0, 1)], c_triples=[(2, 0, 1)]))
        self.assertIn("C(z, xy) requires x || y", [x.name for x in report.violations])

    def test_isomorphisms(self):
        first = FiniteStructure.from_relations(3, less=[(0, 2), (1, 2)])
        second = FiniteStructure.from_relations(3, less=[(1, 0), (2, 0)])
        self.assertEqual(len(find_isomorphisms(first, second)), 2)
        self.assertFalse(are_isomorphic(first, FiniteStructure.chain(3)))
        self.assertFalse(are_isomorphic(first, FiniteStructure.chain(2)))
        relabelled = FiniteStructure.from_relations(3, c_triples=[(0, 1, 2)])
        self.assertEqual(find_isomorphisms(antichain_with_c(), relabelled), [(1, 2, 0), (2, 1, 0)])

    def test_convex_extension_examples(self):
        self.assertEqual([x.order for x in convex_extensions(FiniteStructure.chain(3))], [(0, 1, 2)])
        v_shape = FiniteStructure.from_relations(3, less=[(0, 2), (1, 2)])
        self.assertEqual([x.order for x in convex_extensions(v_shape)], [(0, 1, 2), (1, 0, 2)])
        orders = {x.order for x in convex_extensions(antichain_with_c())}
        self.assertEqual(orders, {(0, 1, 2), (1, 0, 2), (2, 0, 1), (2, 1, 0)})
        self.assertFalse(is_convex_extension(antichain_with_c(), [0, 2, 1]))

    def test_convex_extensions_match_the_filter(self):
        for n in range(1, 6):
            for structure in enumerate_age_structures(n, reduce="full"):
                built = {x.order for x in convex_extensions(structure)}
                filtered = {x.order for x in convex_extensions_by_filter(structure)}
                self.assertEqual(built, filtered, str(structure))

    def test_extensions_of_structures_outside_the_age(self):
        with self.assertRaises(NonRealizableError):
            convex_extensions(FiniteStructure.from_relations(3))

    def test_bounds(self):
        with self.assertRaises(BoundExceededError):
            convex_extensions_by_filter(FiniteStructure.chain(8))
        with self.assertRaises(BoundExceededError):
            find_isomorphisms(FiniteStructure.chain(9), FiniteStructure.chain(9))
        with self.assertRaises(BoundExceededError):
            enumerate_age_structures(7)

    def test_induced_structure(self):
        points = [Node([], 2), Node([], 1), Node(["1/2"], 1)]
        structure = induced_structure(points)
        self.assertTrue(structure.lt(0, 1))
        self.assertTrue(structure.perp(1, 2))
        self.assertTrue(structure.perp(0, 2))
        self.assertEqual(structure.c_triples(), [])
        self.assertTrue(structure.B(0, 1, 2))
        with self.assertRaises(DuplicatePointsError):
            induced_structure([Node([], 1), Node([], 1)])

    def test_json(self):
        structure = FiniteStructure.create_from_json({"n": 3, "C": [[2, 0, 1]]})
        self.assertEqual(structure, antichain_with_c())
        self.assertEqual(structure.to_json(), {"n": 3, "leq": np.eye(3, dtype=int).tolist(), "C": [[2, 0, 1]]})
        with self.assertRaises(DimensionMismatchError):
            FiniteStructure.create_from_json({"n": 3, "C": [[3, 0, 1]]})
        with self.assertRaises(DimensionMismatchError):
            FiniteStructure.create_from_json({"n": 2, "leq": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})

    def test_forest_code(self):
        first = FinitePoset(FiniteStructure.from_relations(3, less=[(0, 2), (1, 2)]).poset.leq_table)
        second = FiniteStructure.from_relations(3, less=[(1, 0), (2, 0)]).poset
        self.assertEqual(first.forest_code(), second.forest_code())
        self.assertNotEqual(first.forest_code(), FiniteStructure.chain(3).poset.forest_code())
        self.assertTrue(first.is_semilinear())
        self.assertEqual(first.parent(0), 2)
        self.assertIsNone(first.parent(2))
