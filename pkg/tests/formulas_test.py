import unittest
from fractions import Fraction
from itertools import product
from random import Random

from arbor.formulas import ArityError, FormulaSyntaxError, QfFormula, named_formula
from arbor.model import (
    above,
    below,
    chain_Betw,
    chain_Cyc,
    chain_Sep,
    neq,
    random_node,
    rel_B,
    rel_D,
    rel_R,
)


class TestFormulas(unittest.TestCase):

    def setUp(self):
        rng = Random(9)
        self.triples = []
        for i in range(200):
            a, b, c = random_node(rng), random_node(rng), random_node(rng)
            if i % 3 == 0:
                b = above(a)
            elif i % 3 == 1:
                c = below(b)
            self.triples.append((a, b, c))

    def test_named_formulas_match_the_relations(self):
        b, r, d = named_formula("B"), named_formula("R"), named_formula("D")
        for x, y, z in self.triples:
            self.assertEqual(b(x, y, z), rel_B(x, y, z))
            self.assertEqual(r(x, y, z), rel_R(x, y, z))
            self.assertEqual(d(x, y, z, x), rel_D(x, y, z, x))
            self.assertEqual(d(x, z, y, above(x)), rel_D(x, z, y, above(x)))

    def test_chain_formulas(self):
        betw, cyc, sep = named_formula("Betw"), named_formula("Cyc"), named_formula("Sep")
        values = [Fraction(x) for x in range(4)]
        for x, y, z in product(values, repeat=3):
            self.assertEqual(betw.evaluate_chain(x, y, z), chain_Betw(x, y, z))
            self.assertEqual(cyc.evaluate_chain(x, y, z), chain_Cyc(x, y, z))
        for args in product(values, repeat=4):
            self.assertEqual(sep.evaluate_chain(*args), chain_Sep(*args))

    def test_chain_semantics_of_incomparability(self):
        self.assertFalse(QfFormula("x || y").evaluate_chain(Fraction(1), Fraction(2)))
        self.assertFalse(QfFormula("C(x, y z)").evaluate_chain(Fraction(1), Fraction(2), Fraction(3)))
        self.assertTrue(QfFormula("!(x || y)").evaluate_chain(Fraction(1), Fraction(2)))

    def test_de_morgan_variant(self):
        for name in ("B", "R"):
            formula = named_formula(name)
            variant = formula.de_morgan_variant()
            self.assertEqual(variant.variables, formula.variables)
            for args in self.triples:
                self.assertEqual(variant(*args), formula(*args))

    def test_unicode_aliases(self):
        formula = QfFormula("x ≠ y ∧ ¬(x ⊥ y)")
        for x, y, _ in self.triples:
            self.assertEqual(formula(x, y), neq(x, y) and not QfFormula("x || y")(x, y))

    def test_variables(self):
        self.assertEqual(QfFormula("y < x & C(z, x y)").variables, ("y", "x", "z"))
        self.assertEqual(QfFormula("x < y", ("y", "x")).variables, ("y", "x"))
        self.assertEqual(named_formula("Sep").arity, 4)

    def test_syntax_errors(self):
        for text in ("x <", "C(x, y)", "x < y)", "(x < y", "x ~ y", "x < y &", "C < x", ""):
            with self.assertRaises(FormulaSyntaxError):
                QfFormula(text)
        with self.assertRaises(FormulaSyntaxError):
            QfFormula("x < w", ("x", "y"))

    def test_arity(self):
        with self.assertRaises(ArityError):
            QfFormula("a < b & c < d & d < e")
        with self.assertRaises(ArityError):
            QfFormula("x < y")(random_node(Random(0)))
