import unittest
from random import Random

from arbor.engine import (
    AgeRejectionError,
    AlreadyMappedError,
    InvalidPartialIsoError,
    PartialIso,
    embed_structure,
    embedding_order,
    extend_partial_iso,
    homogeneity_extend,
    is_in_age,
    realize_forest,
)
from arbor.model import ROOT, Node, random_nodes
from arbor.structures import (
    FiniteStructure,
    NonRealizableError,
    enumerate_age_structures,
    find_isomorphisms,
    induced_structure,
)


class TestEngine(unittest.TestCase):

    def test_embedding_induces_the_structure(self):
        for n in range(1, 7):
            for structure in enumerate_age_structures(n, reduce="full"):
                points = embed_structure(structure)
                self.assertEqual(induced_structure(points), structure, str(structure))

    def test_embedding_poset_labellings(self):
        for structure in enumerate_age_structures(4):
            self.assertEqual(induced_structure(embed_structure(structure)), structure, str(structure))

    def test_age_rejection(self):
        antichain = FiniteStructure.from_relations(3)
        self.assertEqual(embedding_order(antichain), [0, 1, 2])
        with self.assertRaises(AgeRejectionError) as context:
            embed_structure(antichain)
        self.assertEqual(context.exception.index, 2)
        self.assertFalse(is_in_age(antichain))
        self.assertFalse(is_in_age(FiniteStructure.from_relations(3, less=[(0, 1), (0, 2)])))
        self.assertTrue(is_in_age(FiniteStructure.from_relations(3, c_triples=[(0, 1, 2)])))

    def test_embedding_order_goes_top_down(self):
        self.assertEqual(embedding_order(FiniteStructure.chain(3)), [2, 1, 0])

    def test_homogeneity(self):
        domain = [Node([], 1), Node(["1/2"], 1)]
        image = [Node([], 2), Node(["3/2"], 2)]
        extra = [ROOT, Node([], 3), Node(["1/4"], 1), Node(["1/2", "3/4"], 2)]
        rho = homogeneity_extend(domain, image, extra)
        self.assertEqual(len(rho), 6)
        self.assertTrue(rho.is_valid())
        self.assertEqual(rho(Node([], 1)), Node([], 2))
        swapped = homogeneity_extend(domain, list(reversed(image)), extra, iso=[1, 0])
        self.assertTrue(swapped.is_valid())
        self.assertEqual(swapped(Node(["1/2"], 1)), Node(["3/2"], 2))

    def test_homogeneity_on_random_points(self):
        rng = Random(1)
        swapped = 0
        for _ in range(200):
            base = random_nodes(rng, rng.randint(1, 4))
            structure = induced_structure(base)
            automorphism = rng.choice(find_isomorphisms(structure, structure))
            copy = embed_structure(structure)
            extra = [x for x in random_nodes(rng, 3) if x not in base]
            rho = homogeneity_extend(base, copy, extra, iso=automorphism)
            self.assertTrue(rho.is_valid(), str(rho))
            for i, point in enumerate(base):
                self.assertEqual(rho(point), copy[automorphism[i]])
            if list(automorphism) != list(range(len(base))):
                swapped += 1
        self.assertGreater(swapped, 0)

    def test_partial_iso_errors(self):
        with self.assertRaises(InvalidPartialIsoError):
            PartialIso([ROOT], [])
        comparable = PartialIso([Node([], 1), Node([], 2)], [Node([], 1), Node(["1/2"], 1)])
        self.assertFalse(comparable.is_valid())
        with self.assertRaises(InvalidPartialIsoError):
            comparable.verify()
        with self.assertRaises(InvalidPartialIsoError):
            extend_partial_iso(comparable, ROOT)
        with self.assertRaises(AlreadyMappedError):
            extend_partial_iso(PartialIso.identity([ROOT]), ROOT)

    def test_realize_forest(self):
        for less in ([], [(0, 1)], [(0, 2), (1, 2)], [(0, 1), (1, 3), (2, 3)], [(0, 3), (1, 3), (2, 3)]):
            n = 1 + max([j for _, j in less], default=1)
            poset = FiniteStructure.from_relations(n, less=less).poset
            self.assertEqual(induced_structure(realize_forest(poset)).poset, poset)
        with self.assertRaises(NonRealizableError):
            realize_forest(FiniteStructure.from_relations(3, less=[(0, 1), (0, 2)]).poset)
