"""
Satisfiability of conjunctions of tree description atoms. The solver is complete at desk scale: variables are
assigned one at a time and every assignment step tries one Node per quantifier-free type over the Nodes assigned
so far, so every configuration the model can realize is visited.
"""
import logging
import re
from collections.abc import Sequence
from itertools import product
from random import Random
from typing import Any

from arbor.model import RELATIONS, Node, WitnessSearchError, witness_grid
from arbor.structures import check_bound, enumerate_age_structures

log = logging.getLogger(__name__)

INFIX_ATOM_REGEX = re.compile(r"^(\w+)\s*(<=|>=|!=|<|>|=|\|\|)\s*(\w+)$")
PREFIX_ATOM_REGEX = re.compile(r"^([BCRD])\s*\((.*)\)$")
ARGUMENT_SEPARATOR_REGEX = re.compile(r"[\s,]+")
VARIABLE_REGEX = re.compile(r"^\w+$")

INFIX_RELATIONS: dict[str, str] = {
    "<": "lt",
    "<=": "leq",
    ">": "gt",
    ">=": "geq",
    "=": "eq",
    "!=": "neq",
    "||": "perp",
}

Assignment = dict[str, Node]


class MalformedInstanceError(Exception):

    def __init__(self, line_number: int, text: str, reason: str = "") -> None:
        self.line_number = line_number
        self.text = text
        message = f"line {line_number}: cannot read '{text}'"
        super().__init__(f"{message} ({reason})" if reason else message)


class MissingVariableError(Exception):

    def __init__(self, variable: str) -> None:
        self.variable = variable
        super().__init__(f"variable '{variable}' has no value")


class Atom:

    def __init__(self, relation: str, args: Sequence[str]) -> None:
        if relation not in RELATIONS:
            raise KeyError(f"unknown relation '{relation}'")
        arity = RELATIONS[relation].arity
        if len(args) != arity:
            raise ValueError(f"relation {relation} takes {arity} arguments, {len(args)} given")
        self.relation = relation
        self.args: tuple[str, ...] = tuple(args)

    def evaluate(self, assignment: Assignment) -> bool:
        return RELATIONS[self.relation](*(assignment[x] for x in self.args))

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Atom) and (self.relation == other.relation) and (self.args == other.args)

    def __hash__(self) -> int:
        return hash((self.relation, self.args))

    def __str__(self) -> str:
        symbol = RELATIONS[self.relation].symbol
        if symbol is not None:
            return f"{self.args[0]} {symbol} {self.args[1]}"
        if self.relation == "C":
            return f"C({self.args[0]}, {self.args[1]} {self.args[2]})"
        return f"{self.relation}({','.join(self.args)})"

    def __repr__(self) -> str:
        return f"Atom({self})"


class ConstraintInstance:

    def __init__(self, variables: Sequence[str], atoms: Sequence[Atom]) -> None:
        self.variables: tuple[str, ...] = tuple(variables)
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        for atom in self.atoms:
            for x in atom.args:
                if x not in self.variables:
                    raise MissingVariableError(x)

    @classmethod
    def from_atoms(cls, atoms: Sequence[Atom]) -> "ConstraintInstance":
        """ variables in order of first appearance """
        variables: list[str] = []
        for atom in atoms:
            for x in atom.args:
                if x not in variables:
                    variables.append(x)
        return cls(variables, atoms)

    def with_atom(self, atom: Atom) -> "ConstraintInstance":
        return ConstraintInstance.from_atoms(self.atoms + (atom,))

    def __str__(self) -> str:
        return "{" + ", ".join(str(x) for x in self.atoms) + "}"


def parse_atom(text: str, line_number: int = 1) -> Atom:
    text = text.strip()
    match = INFIX_ATOM_REGEX.match(text)
    if match:
        left, operator, right = match.groups()
        return Atom(INFIX_RELATIONS[operator], (left, right))
    match = PREFIX_ATOM_REGEX.match(text)
    if match:
        relation, arguments = match.groups()
        args = [x for x in ARGUMENT_SEPARATOR_REGEX.split(arguments.strip()) if x]
        if not all(VARIABLE_REGEX.match(x) for x in args):
            raise MalformedInstanceError(line_number, text, "arguments must be variable names")
        try:
            return Atom(relation, args)
        except ValueError as e:
            raise MalformedInstanceError(line_number, text, str(e)) from e
    raise MalformedInstanceError(line_number, text)


def parse_instance(text: str) -> ConstraintInstance:
    """ one atom per line, '#' starts a comment """
    atoms: list[Atom] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            atoms.append(parse_atom(content, line_number))
    return ConstraintInstance.from_atoms(atoms)


def _atoms_by_last_variable(instance: ConstraintInstance) -> list[list[Atom]]:
    """ result[i] holds the atoms that become decidable once variable i is assigned """
    position = {x: i for i, x in enumerate(instance.variables)}
    result: list[list[Atom]] = [[] for _ in instance.variables]
    for atom in instance.atoms:
        result[max(position[x] for x in atom.args)].append(atom)
    return result


def solve(instance: ConstraintInstance) -> Assignment | None:
    """ a checked satisfying assignment, None if the instance is unsatisfiable """
    variables = instance.variables
    check_bound("csp variables", len(variables), "bounds.csp variables")
    schedule = _atoms_by_last_variable(instance)
    assignment: Assignment = {}

    def search(index: int) -> bool:
        if index == len(variables):
            return True
        assigned = list(dict.fromkeys(assignment.values()))
        for candidate in witness_grid(assigned):
            assignment[variables[index]] = candidate
            if all(atom.evaluate(assignment) for atom in schedule[index]) and search(index + 1):
                return True
        del assignment[variables[index]]
        return False

    if not search(0):
        log.debug(f"{instance} is unsatisfiable")
        return None
    holds, failing = check(instance, assignment)
    if not holds:
        raise WitnessSearchError(f"solver produced an assignment failing {failing}")
    return dict(assignment)


def brute_force_oracle(instance: ConstraintInstance) -> bool:
    """ satisfiability decided on the relation tables of the finite structures of the age """
    n = len(instance.variables)
    check_bound("oracle variables", n, "bounds.oracle variables")
    if n == 0:
        return True
    position = {x: i for i, x in enumerate(instance.variables)}
    atoms = [(atom.relation, [position[x] for x in atom.args]) for atom in instance.atoms]
    for m in range(1, n + 1):
        for structure in enumerate_age_structures(m, reduce="full"):
            for values in product(range(m), repeat=n):
                if len(set(values)) != m:
                    continue
                if all(structure.holds(relation, *(values[i] for i in args)) for relation, args in atoms):
                    return True
    return False


def check(instance: ConstraintInstance, assignment: Assignment) -> tuple[bool, Atom | None]:
    """ evaluate every atom, returning the first one that fails """
    for x in instance.variables:
        if x not in assignment:
            raise MissingVariableError(x)
    for atom in instance.atoms:
        if not atom.evaluate(assignment):
            return False, atom
    return True, None


def assignment_to_json(assignment: Assignment) -> dict[str, Any]:
    return {x: node.to_json() for x, node in assignment.items()}


def assignment_from_json(assignment_json: dict[str, Any]) -> Assignment:
    return {x: Node.create_from_json(node) for x, node in assignment_json.items()}


def random_instance(
        rng: Random,
        number_of_variables: int,
        number_of_atoms: int,
        relations: Sequence[str] = ("lt", "perp", "B", "C")
) -> ConstraintInstance:
    variables = [f"x{i}" for i in range(number_of_variables)]
    atoms = [
        Atom(relation, [rng.choice(variables) for _ in range(RELATIONS[relation].arity)])
        for relation in (rng.choice(relations) for _ in range(number_of_atoms))
    ]
    return ConstraintInstance(variables, atoms)
