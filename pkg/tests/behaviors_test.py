import unittest

from arbor.behaviors import (
    CONTRADICTION_PATTERNS,
    AsymmetricBehaviorError,
    Behavior,
    BehaviorClass,
    OrbitLabel,
    PairType,
    SameNodeError,
    behavior_consistent,
    classify_behavior,
    configuration_of,
    enumerate_surviving_behaviors,
    one_constant_checks,
    orbit_of,
    partition_behaviors,
    realizable_configurations,
    render_behavior_table,
    render_configuration,
)
from arbor.engine import homogeneity_extend
from arbor.model import ROOT, Node
from arbor.structures import BoundExceededError, FiniteStructure, convex_extensions

LT, GT, PB, PA = PairType.LT, PairType.GT, PairType.PERP_BEFORE, PairType.PERP_AFTER


class TestBehaviors(unittest.TestCase):

    def test_surviving_behaviors(self):
        survivors = enumerate_surviving_behaviors()
        self.assertEqual(len(survivors), 10)
        self.assertEqual({x.key() for x in survivors}, {
            (PB, PB), (PB, PA), (PA, PB), (PA, PA),
            (LT, LT), (LT, GT), (GT, LT), (GT, GT),
            (LT, PB), (LT, PA),
        })

    def test_partition(self):
        partition = partition_behaviors(enumerate_surviving_behaviors())
        self.assertEqual(set(partition), {BehaviorClass.FLAT, BehaviorClass.THIN, BehaviorClass.ORDER_PRESERVING})
        self.assertEqual(len(partition[BehaviorClass.FLAT]), 4)
        self.assertEqual(len(partition[BehaviorClass.THIN]), 4)
        self.assertEqual(len(partition[BehaviorClass.ORDER_PRESERVING]), 2)
        self.assertIsNone(classify_behavior(Behavior.from_images(GT, PB)))

    def test_contradiction_patterns_are_rejected(self):
        for name, behavior in CONTRADICTION_PATTERNS.items():
            consistent, certificate = behavior_consistent(behavior)
            self.assertFalse(consistent, name)
            self.assertIn(certificate, realizable_configurations(3))
            self.assertNotIn(behavior.apply(certificate), realizable_configurations(3))

    def test_consistency_is_monotone_in_the_number_of_points(self):
        for behavior in Behavior.all_behaviors():
            if not behavior_consistent(behavior, 3)[0]:
                self.assertFalse(behavior_consistent(behavior, 4)[0], str(behavior))
        for name, behavior in CONTRADICTION_PATTERNS.items():
            self.assertFalse(behavior_consistent(behavior, 4)[0], name)

    def test_survivors_are_closed_under_composition(self):
        survivors = enumerate_surviving_behaviors()
        for first in survivors:
            for second in survivors:
                self.assertIn(first.compose(second), survivors)

    def test_behavior_construction(self):
        with self.assertRaises(AsymmetricBehaviorError):
            Behavior({LT: LT, GT: LT, PB: PB, PA: PA})
        with self.assertRaises(KeyError):
            Behavior({LT: LT, GT: GT})
        identity = Behavior.identity()
        self.assertEqual(identity(PA), PA)
        flip = Behavior.from_images(LT, PA)
        self.assertEqual(flip.compose(flip), identity)
        self.assertEqual(flip.apply((PB, LT, PA)), (PA, LT, PB))
        self.assertEqual(len(set(Behavior.all_behaviors())), 16)

    def test_configurations(self):
        v_shape = FiniteStructure.from_relations(3, less=[(0, 2), (1, 2)])
        first = convex_extensions(v_shape)[0]
        self.assertEqual(configuration_of(first), (PB, LT, LT))
        self.assertEqual(configuration_of(first, (2, 0, 1)), (GT, GT, PB))
        self.assertEqual(render_configuration((PB, LT, LT)), "0 ||< 1, 0 < 2, 1 < 2")
        self.assertEqual(render_configuration(()), "(empty)")
        self.assertEqual(realizable_configurations(2), frozenset({(LT,), (GT,), (PB,), (PA,)}))

    def test_behavior_bound(self):
        with self.assertRaises(BoundExceededError):
            behavior_consistent(Behavior.identity(), k=5)

    def test_orbits(self):
        a = Node([], 1)
        self.assertEqual(orbit_of(Node([], 2), a), OrbitLabel.U_LT)
        self.assertEqual(orbit_of(ROOT, a), OrbitLabel.U_GT)
        self.assertEqual(orbit_of(Node(["1/2"], 1), a), OrbitLabel.U_PERP_AFTER)
        self.assertEqual(orbit_of(a, Node(["1/2"], 1)), OrbitLabel.U_PERP_BEFORE)
        self.assertEqual(OrbitLabel.U_PERP_AFTER.coarse(), "incomparable")
        self.assertEqual(OrbitLabel.U_LT.coarse(), "below")
        with self.assertRaises(SameNodeError):
            orbit_of(a, a)

    def test_coarse_orbits_are_kept_by_partial_isomorphisms(self):
        a = Node([], 1)
        points = [Node([], 2), ROOT, Node(["1/2"], 1), Node(["1/4", "3/4"], 2)]
        rho = homogeneity_extend([a], [Node(["5/2"], 3)], points)
        for p in points:
            self.assertEqual(orbit_of(p, a).coarse(), orbit_of(rho(p), rho(a)).coarse())

    def test_one_constant_checks(self):
        results = one_constant_checks()
        self.assertEqual(len(results), 7)
        for result in results:
            self.assertTrue(result.passed, str(result))
        self.assertTrue(str(results[0]).startswith("pass"))

    def test_behavior_table(self):
        lines = render_behavior_table().splitlines()
        self.assertEqual(len(lines), 17)
        self.assertEqual(sum(1 for x in lines if "survives" in x), 10)
        self.assertEqual(sum(1 for x in lines if "rejected" in x), 6)
