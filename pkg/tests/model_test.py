import unittest
from fractions import Fraction
from itertools import combinations
from random import Random

from hypothesis import given, settings

from arbor.model import (
    RELATIONS,
    ROOT,
    InvalidNodeError,
    InvalidPositionError,
    Node,
    WitnessPreconditionError,
    above,
    below,
    between,
    branch_off,
    c_by_witness_search,
    chain_Betw,
    chain_Cyc,
    chain_Sep,
    common_upper_bound,
    divergence,
    hint_order,
    hint_precedes,
    leq,
    lemma_key_witness,
    lt,
    nice_witness,
    perp,
    pick_depth,
    pick_turn,
    qf_type,
    random_node,
    random_nodes,
    refine_upper_bound,
    rel_B,
    rel_C,
    rel_D,
    rel_R,
    split_witness,
    witness_grid,
)
from arbor.structures import induced_structure, is_convex_extension
from tests.strategies import distinct_nodes, nodes


def n(turns: tuple[str, ...], depth: str | int) -> Node:
    return Node([Fraction(x) for x in turns], Fraction(depth))


class TestModel(unittest.TestCase):

    def test_node_json(self):
        node = Node.create_from_json({"turns": ["1/2", "5/2"], "depth": "8/3"})
        self.assertEqual(node, n(("1/2", "5/2"), "8/3"))
        self.assertEqual(node.to_json(), {"turns": ["1/2", "5/2"], "depth": "8/3"})
        self.assertEqual(Node.create_from_json({"turns": ["2/4"], "depth": 1}), n(("1/2",), 1))

    def test_invalid_nodes(self):
        for node_json in (
            {"turns": [], "depth": "1/2"},
            {"turns": ["1/3"], "depth": "1"},
            {"turns": ["3/2"], "depth": "1"},
            {"turns": ["1/2", "1/2"], "depth": "1"},
            {"turns": [], "depth": "one"},
            {"turns": []},
        ):
            with self.assertRaises(InvalidNodeError):
                Node.create_from_json(node_json)

    def test_picking_positions(self):
        self.assertEqual(pick_depth(0, 2), 1)
        self.assertEqual(pick_turn(0, 1), Fraction(1, 2))
        self.assertEqual(pick_turn(Fraction(1, 2), 1), Fraction(3, 4))
        self.assertEqual(pick_depth(Fraction(5, 2), 3), Fraction(8, 3))
        self.assertEqual(pick_depth(2, 3), Fraction(7, 3))
        self.assertEqual(pick_turn(0, 1, avoid=[Fraction(1, 2)]), Fraction(1, 4))
        with self.assertRaises(InvalidPositionError):
            pick_depth(1, 1)

    def test_leq_examples(self):
        self.assertTrue(leq(n((), 2), n((), 0)))
        self.assertTrue(leq(n(("1/2",), 1), n(("1/2",), 1)))
        self.assertFalse(leq(n(("1/2",), 1), n((), 1)))
        self.assertFalse(leq(n((), 1), n(("1/2",), 1)))

    def test_perp_and_divergence(self):
        self.assertTrue(perp(n(("1/2",), 1), n((), 1)))
        self.assertFalse(perp(n((), 2), n((), 0)))
        self.assertFalse(perp(ROOT, ROOT))
        self.assertEqual(divergence(n(("1/2",), 1), n((), 1)), Fraction(1, 2))
        self.assertIsNone(divergence(n((), 2), n((), 0)))
        self.assertEqual(divergence(n(("1/4",), 1), n(("1/2",), 1)), Fraction(1, 4))

    def test_c_relation(self):
        x, y = n(("1/2",), 1), n((), 1)
        self.assertTrue(rel_C(n(("1/4",), 1), x, y))
        self.assertFalse(rel_C(n((), 0), x, y))
        self.assertFalse(rel_C(y, x, x))
        witness = n((), "1/3")
        self.assertTrue(lt(x, witness) and lt(y, witness) and perp(witness, n(("1/4",), 1)))

    def test_b_and_r_relations(self):
        self.assertTrue(rel_B(n((), 2), n((), 1), n((), 0)))
        self.assertTrue(rel_B(n((), 2), n((), 1), n(("1/2",), 1)))
        self.assertFalse(rel_B(n((), 1), n((), 2), n((), 0)))
        self.assertTrue(rel_R(n((), 2), n((), 1), n((), 0)))
        self.assertTrue(rel_R(n(("1/2",), 2), n(("1/2",), 1), n((), 1)))
        self.assertFalse(rel_R(n((), 2), n((), 0), n((), 1)))

    def test_d_relation(self):
        x, y = n(("1/2",), 1), n(("3/4",), 1)
        self.assertTrue(rel_D(x, y, n(("1/4",), 1), n(("1/8",), 1)))
        self.assertFalse(rel_D(x, x, n(("1/4",), 1), n(("1/8",), 1)))
        self.assertFalse(rel_D(x, y, n(("5/8",), 1), n((), 1)))

    def test_chain_relations(self):
        self.assertTrue(chain_Cyc(1, 2, 3))
        self.assertTrue(chain_Cyc(3, 1, 2))
        self.assertFalse(chain_Cyc(3, 2, 1))
        self.assertTrue(chain_Betw(3, 2, 1))
        self.assertFalse(chain_Betw(2, 3, 1))
        self.assertTrue(chain_Sep(1, 3, 2, 4))
        self.assertFalse(chain_Sep(1, 2, 3, 4))

    def test_relation_arities(self):
        arities = {name: relation.arity for name, relation in RELATIONS.items()}
        self.assertEqual(arities, {
            "eq": 2, "neq": 2, "leq": 2, "lt": 2, "gt": 2, "geq": 2, "perp": 2, "B": 3, "C": 3, "R": 3, "D": 4
        })

    def test_axiom_witnesses(self):
        self.assertEqual(between(n((), 2), n((), 0)), n((), 1))
        self.assertEqual(above(n((), 0)), n((), -1))
        self.assertTrue(lt(below(n(("1/2",), 1)), n(("1/2",), 1)))
        a = n((), 3)
        u = branch_off(a, 0, 3)
        self.assertTrue(perp(a, u))
        self.assertTrue(0 < divergence(a, u) < 3)
        with self.assertRaises(WitnessPreconditionError):
            between(n((), 0), n((), 2))
        with self.assertRaises(WitnessPreconditionError):
            branch_off(a, 2, 4)

    def test_supplementary_witnesses(self):
        points = [n(("1/4",), 1), n(("1/2",), 2), n((), "7/3")]
        top = common_upper_bound(points)
        self.assertTrue(all(lt(x, top) for x in points))
        x, y = n(("1/2",), 1), n((), 1)
        z = nice_witness(x, y)
        self.assertTrue(lt(x, z) and perp(z, y))
        a, b, c = n(("1/4",), 1), n(("1/2",), 1), n((), 1)
        u = split_witness(a, b, c)
        self.assertTrue(lt(b, u) and lt(c, u) and perp(a, u))
        refined = refine_upper_bound(x, y, n((), 0))
        self.assertTrue(lt(x, refined) and lt(y, refined) and lt(refined, n((), 0)))

    def test_lemma_key_witness(self):
        self.assertEqual(lemma_key_witness([n((), 3)], [n((), 0)], [n(("5/2",), 3)]), n((), "8/3"))
        result = lemma_key_witness([n((), 3)], [], [])
        self.assertTrue(lt(n((), 3), result))
        self.assertEqual(lemma_key_witness([n(("1/2",), 2), n((), 2)], [n((), 0)], []), n((), "1/3"))
        with self.assertRaises(WitnessPreconditionError):
            lemma_key_witness([], [n((), 0)], [])
        with self.assertRaises(WitnessPreconditionError):
            lemma_key_witness([n((), 3)], [], [n((), 1)])

    def test_witness_grid(self):
        self.assertEqual(witness_grid(()), [ROOT])
        points = (n(("1/2",), 1), n((), 2))
        grid = witness_grid(points)
        for point in points:
            self.assertIn(point, grid)
        types = [qf_type(x, points) for x in grid]
        self.assertEqual(len(types), len(set(types)))

    @settings(max_examples=60, deadline=None)
    @given(distinct_nodes(2), nodes())
    def test_witness_grid_is_type_complete(self, points, p):
        grid_types = {qf_type(x, points) for x in witness_grid(points)}
        self.assertIn(qf_type(p, points), grid_types)

    @settings(max_examples=30, deadline=None)
    @given(distinct_nodes(3), nodes())
    def test_witness_grid_is_type_complete_over_three_points(self, points, p):
        grid_types = {qf_type(x, points) for x in witness_grid(points)}
        self.assertIn(qf_type(p, points), grid_types)

    @given(nodes(), nodes(), nodes())
    def test_partial_order(self, a, b, c):
        self.assertTrue(leq(a, a))
        if leq(a, b) and leq(b, a):
            self.assertEqual(a, b)
        if leq(a, b) and leq(b, c):
            self.assertTrue(leq(a, c))
        if leq(a, b) and leq(a, c):
            self.assertFalse(perp(b, c))
        self.assertEqual(perp(a, b), not (leq(a, b) or leq(b, a)))

    def test_binary_pigeonhole(self):
        rng = Random(7)
        checked = 0
        while checked < 200:
            a, b, c = random_node(rng), random_node(rng), random_node(rng)
            if not (perp(a, b) and perp(b, c) and perp(a, c)):
                continue
            checked += 1
            self.assertEqual(sum((rel_C(a, b, c), rel_C(b, a, c), rel_C(c, a, b))), 1)

    def test_c_agrees_with_witness_search(self):
        rng = Random(3)
        for _ in range(300):
            z, x, y = random_node(rng), random_node(rng), random_node(rng)
            self.assertEqual(rel_C(z, x, y), c_by_witness_search(z, x, y), f"{z} {x} {y}")

    @settings(max_examples=50, deadline=None)
    @given(distinct_nodes(4))
    def test_hint_order_is_a_convex_extension(self, points):
        order = hint_order(points)
        self.assertTrue(is_convex_extension(induced_structure(points), order))
        for i, j in combinations(order, 2):
            self.assertFalse(hint_precedes(points[j], points[i]))

    def test_hint_example(self):
        points = [ROOT, n((), 1), n(("1/2",), 1)]
        self.assertEqual(hint_order(points), [1, 2, 0])
        self.assertFalse(hint_precedes(n(("1/2",), 1), n((), 1)))

    def test_random_nodes(self):
        rng = Random(0)
        sample = random_nodes(rng, 20)
        self.assertEqual(len(sample), len(set(sample)))
        for node in sample:
            self.assertLessEqual(node.depth, 6)
            self.assertLessEqual(len(node.turns), 3)
        self.assertEqual(random_nodes(Random(5), 10), random_nodes(Random(5), 10))
