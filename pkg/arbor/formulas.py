"""
Quantifier-free formulas over {<, <=, =, !=, ||, C}, parsed into small syntax trees that can be evaluated on Nodes or
on the rationals of a chain.

grammar:
    formula     := conjunction ('|' conjunction)*
    conjunction := unary ('&' unary)*
    unary       := '!' unary | '(' formula ')' | atom
    atom        := 'C' '(' var [','] var [','] var ')' | var op var        op in < <= > >= = != ||
"""
import re
from collections.abc import Callable, Sequence
from fractions import Fraction
from itertools import pairwise
from typing import Any

from arbor.globals import GlobalSettings
from arbor.model import eq, geq, gt, leq, lt, neq, perp, rel_C

TOKEN_REGEX = re.compile(r"\s*(<=|>=|!=|\|\||[<>=()&|!,]|[A-Za-z_][A-Za-z_0-9]*)")
UNICODE_ALIASES: dict[str, str] = {
    "≠": "!=", "≤": "<=", "≥": ">=", "⊥": "||", "∧": "&", "∨": "|", "¬": "!"
}
COMPARISONS = ("<", "<=", ">", ">=", "=", "!=", "||")

NODE_SEMANTICS: dict[str, Callable[..., bool]] = {
    "<": lt, "<=": leq, ">": gt, ">=": geq, "=": eq, "!=": neq, "||": perp, "C": rel_C,
}

# a chain has no incomparable pairs, so || and C are always false on it
CHAIN_SEMANTICS: dict[str, Callable[..., bool]] = {
    "<": lambda x, y: x < y,
    "<=": lambda x, y: x <= y,
    ">": lambda x, y: x > y,
    ">=": lambda x, y: x >= y,
    "=": lambda x, y: x == y,
    "!=": lambda x, y: x != y,
    "||": lambda x, y: False,
    "C": lambda z, x, y: False,
}


class FormulaSyntaxError(Exception):

    def __init__(self, position: int, token: str, expected: str) -> None:
        self.position = position
        self.token = token
        super().__init__(f"unexpected '{token}' at position {position}, expected {expected}")


class ArityError(Exception):

    def __init__(self, arity: int, bound: int) -> None:
        super().__init__(f"formula has {arity} variables, at most {bound} are allowed")


# syntax tree

class Expression:

    def evaluate(self, values: dict[str, Any], semantics: dict[str, Callable[..., bool]]) -> bool:
        raise NotImplementedError

    def negated(self) -> "Expression":
        return Not(self)

    def de_morgan(self) -> "Expression":
        raise NotImplementedError


class AtomicExpression(Expression):

    def __init__(self, operator: str, args: Sequence[str]) -> None:
        self.operator = operator
        self.args: tuple[str, ...] = tuple(args)

    def evaluate(self, values: dict[str, Any], semantics: dict[str, Callable[..., bool]]) -> bool:
        return semantics[self.operator](*(values[x] for x in self.args))

    def de_morgan(self) -> Expression:
        return self

    def __str__(self) -> str:
        if self.operator == "C":
            return f"C({self.args[0]}, {self.args[1]} {self.args[2]})"
        return f"{self.args[0]} {self.operator} {self.args[1]}"


class Not(Expression):

    def __init__(self, child: Expression) -> None:
        self.child = child

    def evaluate(self, values: dict[str, Any], semantics: dict[str, Callable[..., bool]]) -> bool:
        return not self.child.evaluate(values, semantics)

    def negated(self) -> Expression:
        return self.child

    def de_morgan(self) -> Expression:
        return Not(self.child.de_morgan())

    def __str__(self) -> str:
        return f"!({self.child})"


class And(Expression):

    def __init__(self, children: Sequence[Expression]) -> None:
        self.children: tuple[Expression, ...] = tuple(children)

    def evaluate(self, values: dict[str, Any], semantics: dict[str, Callable[..., bool]]) -> bool:
        return all(x.evaluate(values, semantics) for x in self.children)

    def de_morgan(self) -> Expression:
        return Not(Or([x.de_morgan().negated() for x in self.children]))

    def __str__(self) -> str:
        return " & ".join(f"({x})" for x in self.children)


class Or(Expression):

    def __init__(self, children: Sequence[Expression]) -> None:
        self.children: tuple[Expression, ...] = tuple(children)

    def evaluate(self, values: dict[str, Any], semantics: dict[str, Callable[..., bool]]) -> bool:
        return any(x.evaluate(values, semantics) for x in self.children)

    def de_morgan(self) -> Expression:
        return Not(And([x.de_morgan().negated() for x in self.children]))

    def __str__(self) -> str:
        return " | ".join(f"({x})" for x in self.children)


# parsing

def tokenize(text: str) -> list[tuple[int, str]]:
    for alias, replacement in UNICODE_ALIASES.items():
        text = text.replace(alias, replacement)
    tokens: list[tuple[int, str]] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = TOKEN_REGEX.match(text, position)
        if match is None:
            raise FormulaSyntaxError(position, text[position:].strip()[:1], "a token")
        tokens.append((match.start(1), match.group(1)))
        position = match.end()
    return tokens


class _Parser:

    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.index = 0
        self.length = len(text)

    def peek(self) -> str | None:
        return self.tokens[self.index][1] if self.index < len(self.tokens) else None

    def take(self, expected: str | None = None, description: str | None = None) -> str:
        token = self.peek()
        if (token is None) or ((expected is not None) and (token != expected)):
            position = self.tokens[self.index][0] if token is not None else self.length
            raise FormulaSyntaxError(position, token or "end of input", description or f"'{expected}'")
        self.index += 1
        return token

    def variable(self) -> str:
        token = self.peek()
        if (token is None) or (not re.match(r"^[A-Za-z_]\w*$", token)) or (token == "C"):
            self.take("", "a variable")
        return self.take()

    def formula(self) -> Expression:
        children = [self.conjunction()]
        while self.peek() == "|":
            self.take("|")
            children.append(self.conjunction())
        return children[0] if len(children) == 1 else Or(children)

    def conjunction(self) -> Expression:
        children = [self.unary()]
        while self.peek() == "&":
            self.take("&")
            children.append(self.unary())
        return children[0] if len(children) == 1 else And(children)

    def unary(self) -> Expression:
        token = self.peek()
        if token == "!":
            self.take("!")
            return Not(self.unary())
        if token == "(":
            self.take("(")
            result = self.formula()
            self.take(")")
            return result
        return self.atom()

    def atom(self) -> Expression:
        if self.peek() == "C":
            self.take("C")
            self.take("(")
            args = [self.variable()]
            for _ in range(2):
                if self.peek() == ",":
                    self.take(",")
                args.append(self.variable())
            self.take(")")
            return AtomicExpression("C", args)
        left = self.variable()
        operator = self.peek()
        if operator not in COMPARISONS:
            self.take("", "a comparison")
        self.take()
        return AtomicExpression(operator, (left, self.variable()))

    def parse(self) -> Expression:
        result = self.formula()
        if self.peek() is not None:
            self.take("", "end of input")
        return result


def _collect_variables(expression: Expression, result: list[str]) -> None:
    if isinstance(expression, AtomicExpression):
        for x in expression.args:
            if x not in result:
                result.append(x)
    elif isinstance(expression, Not):
        _collect_variables(expression.child, result)
    elif isinstance(expression, And | Or):
        for child in expression.children:
            _collect_variables(child, result)


class QfFormula:
    """ a parsed formula together with the order in which its variables take the arguments """

    def __init__(self, text: str, variables: Sequence[str] | None = None) -> None:
        self.text = text
        self.tree: Expression = _Parser(text).parse()
        found: list[str] = []
        _collect_variables(self.tree, found)
        if variables is None:
            variables = found
        missing = [x for x in found if x not in variables]
        if missing:
            raise FormulaSyntaxError(text.find(missing[0]), missing[0], f"one of the variables {tuple(variables)}")
        self.variables: tuple[str, ...] = tuple(variables)
        bound = GlobalSettings.get("bounds.formula arity")
        if self.arity > bound:
            raise ArityError(self.arity, bound)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def _values(self, args: Sequence[Any]) -> dict[str, Any]:
        if len(args) != self.arity:
            raise ArityError(len(args), self.arity)
        return dict(zip(self.variables, args, strict=True))

    def evaluate(self, *nodes: Any) -> bool:
        return self.tree.evaluate(self._values(nodes), NODE_SEMANTICS)

    def evaluate_chain(self, *values: Fraction) -> bool:
        return self.tree.evaluate(self._values(values), CHAIN_SEMANTICS)

    def __call__(self, *nodes: Any) -> bool:
        return self.evaluate(*nodes)

    def de_morgan_variant(self) -> "QfFormula":
        """ an equivalent formula with every conjunction and disjunction swapped through a double negation """
        return QfFormula(str(self.tree.de_morgan()), self.variables)

    def __str__(self) -> str:
        return self.text


def _ordered_disjunction(patterns: Sequence[Sequence[str]]) -> str:
    return " | ".join("(" + " & ".join(f"{a} < {b}" for a, b in pairwise(x)) + ")" for x in patterns)


B_FORMULA = "(x < y & y < z) | (z < y & y < x) | (x < y & y || z) | (z < y & y || x)"
R_FORMULA = "C(z, x y) | (x < z & y < z) | (x || z & y || z & (x < y | y < x))"
D_FORMULA = "(C(u, x y) & C(v, x y)) | (C(x, u v) & C(y, u v))"
BETW_FORMULA = _ordered_disjunction((("x", "y", "z"), ("z", "y", "x")))
CYC_FORMULA = _ordered_disjunction((("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")))
SEP_FORMULA = _ordered_disjunction((
    ("x1", "x2", "y1", "y2"), ("x1", "y2", "y1", "x2"), ("y1", "x2", "x1", "y2"), ("y1", "y2", "x1", "x2"),
    ("x2", "x1", "y2", "y1"), ("x2", "y1", "y2", "x1"), ("y2", "x1", "x2", "y1"), ("y2", "y1", "x2", "x1"),
))

NAMED_FORMULAS: dict[str, tuple[str, tuple[str, ...]]] = {
    "B": (B_FORMULA, ("x", "y", "z")),
    "R": (R_FORMULA, ("x", "y", "z")),
    "D": (D_FORMULA, ("x", "y", "u", "v")),
    "Betw": (BETW_FORMULA, ("x", "y", "z")),
    "Cyc": (CYC_FORMULA, ("x", "y", "z")),
    "Sep": (SEP_FORMULA, ("x1", "y1", "x2", "y2")),
}


def named_formula(name: str) -> QfFormula:
    text, variables = NAMED_FORMULAS[name]
    return QfFormula(text, variables)
