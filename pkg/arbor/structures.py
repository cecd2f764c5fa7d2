"""
Finite semilinear orders and finite {<=, C} structures: validation, isomorphisms, convex linear extensions and the
duplicate-free enumeration of the finite structures that embed into the model.
"""
import logging
from collections.abc import Iterable, Sequence
from functools import cache
from itertools import combinations, pairwise, permutations
from typing import Any

import numpy as np

from arbor.globals import GlobalSettings
from arbor.model import Node, divergence, leq, rel_C, witness_grid

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)

REDUCE_MODES = ("poset", "full")


class DimensionMismatchError(Exception):

    def __init__(self, table: str, expected: tuple[int, ...], found: tuple[int, ...]) -> None:
        super().__init__(f"table '{table}' has shape {found}, expected {expected}")


class BoundExceededError(Exception):

    def __init__(self, what: str, value: int, bound: int) -> None:
        self.value = value
        self.bound = bound
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class NonRealizableError(Exception):

    def __init__(self, message: str) -> None:
        super().__init__(message)


class DuplicatePointsError(Exception):

    def __init__(self, point: Node) -> None:
        self.point = point
        super().__init__(f"point {point} appears more than once")


def check_bound(what: str, value: int, setting: str) -> None:
    bound = GlobalSettings.get(setting)
    if value > bound:
        raise BoundExceededError(what, value, bound)


class FinitePoset:

    def __init__(self, leq_table: np.ndarray) -> None:
        leq_table = np.asarray(leq_table, dtype=bool)
        if (leq_table.ndim != 2) or (leq_table.shape[0] != leq_table.shape[1]):
            raise DimensionMismatchError("leq", (len(leq_table), len(leq_table)), leq_table.shape)
        self.leq_table = leq_table

    @property
    def n(self) -> int:
        return self.leq_table.shape[0]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.leq_table[i, j])

    def lt(self, i: int, j: int) -> bool:
        return (i != j) and bool(self.leq_table[i, j])

    def perp(self, i: int, j: int) -> bool:
        return not (self.leq_table[i, j] or self.leq_table[j, i])

    def up_set(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.leq_table[i, j]]

    def down_set(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.leq_table[j, i]]

    def maximal_elements(self, elements: Iterable[int] | None = None) -> list[int]:
        elements = list(range(self.n)) if elements is None else list(elements)
        return [x for x in elements if not any(self.lt(x, y) for y in elements)]

    def is_semilinear(self) -> bool:
        """ True if every principal up-set is a chain """
        for i in range(self.n):
            up = self.up_set(i)
            for x, y in combinations(up, 2):
                if self.perp(x, y):
                    return False
        return True

    def parent(self, i: int) -> int | None:
        """ the lowest element strictly above i, None for maximal elements (the poset must be a forest) """
        strictly_above = [j for j in self.up_set(i) if j != i]
        if not strictly_above:
            return None
        return max(strictly_above, key=lambda j: len(self.up_set(j)))

    def forest_code(self) -> str:
        """ canonical code of the Hasse forest, equal codes iff isomorphic forests """
        children: dict[int | None, list[int]] = {}
        for i in range(self.n):
            children.setdefault(self.parent(i), []).append(i)

        def code(i: int) -> str:
            return "(" + "".join(sorted(code(x) for x in children.get(i, []))) + ")"

        return "".join(sorted(code(x) for x in children.get(None, [])))

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FinitePoset) and np.array_equal(self.leq_table, other.leq_table)


class FiniteStructure:
    """ a finite {<=, C} structure stored as explicit relation tables """

    def __init__(self, poset: FinitePoset, c_table: np.ndarray | None = None) -> None:
        self.poset = poset
        n = poset.n
        if c_table is None:
            c_table = np.zeros((n, n, n), dtype=bool)
        c_table = np.asarray(c_table, dtype=bool)
        if c_table.shape != (n, n, n):
            raise DimensionMismatchError("C", (n, n, n), c_table.shape)
        self.c_table = c_table

    @classmethod
    def from_relations(
            cls,
            n: int,
            less: Iterable[tuple[int, int]] = (),
            c_triples: Iterable[tuple[int, int, int]] = ()
    ) -> "FiniteStructure":
        """ build a structure from strict order pairs (closed reflexively & transitively) and C triples (closed
        under swapping the last two arguments) """
        leq_table = np.eye(n, dtype=bool)
        for i, j in less:
            leq_table[i, j] = True
        for k in range(n):
            leq_table |= leq_table[:, [k]] & leq_table[[k], :]
        c_table = np.zeros((n, n, n), dtype=bool)
        for z, x, y in c_triples:
            c_table[z, x, y] = True
            c_table[z, y, x] = True
        return cls(FinitePoset(leq_table), c_table)

    @classmethod
    def chain(cls, n: int) -> "FiniteStructure":
        """ 0 < 1 < ... < n-1 """
        return cls.from_relations(n, pairwise(range(n)))

    @property
    def n(self) -> int:
        return self.poset.n

    def leq(self, i: int, j: int) -> bool:
        return self.poset.leq(i, j)

    def lt(self, i: int, j: int) -> bool:
        return self.poset.lt(i, j)

    def perp(self, i: int, j: int) -> bool:
        return self.poset.perp(i, j)

    def C(self, z: int, x: int, y: int) -> bool:
        return bool(self.c_table[z, x, y])

    def B(self, x: int, y: int, z: int) -> bool:
        return (
            (self.lt(x, y) and self.lt(y, z))
            or (self.lt(z, y) and self.lt(y, x))
            or (self.lt(x, y) and self.perp(y, z))
            or (self.lt(z, y) and self.perp(y, x))
        )

    def R(self, x: int, y: int, z: int) -> bool:
        return (
            self.C(z, x, y)
            or (self.lt(x, z) and self.lt(y, z))
            or (self.perp(x, z) and self.perp(y, z) and (self.lt(x, y) or self.lt(y, x)))
        )

    def D(self, x: int, y: int, u: int, v: int) -> bool:
        return (self.C(u, x, y) and self.C(v, x, y)) or (self.C(x, u, v) and self.C(y, u, v))

    def holds(self, relation: str, *args: int) -> bool:
        """ evaluate a relation of the signature by name on element indices """
        match relation:
            case "eq":
                return args[0] == args[1]
            case "neq":
                return args[0] != args[1]
            case "leq":
                return self.leq(*args)
            case "lt":
                return self.lt(*args)
            case "gt":
                return self.lt(args[1], args[0])
            case "geq":
                return self.leq(args[1], args[0])
            case "perp":
                return self.perp(*args)
            case "B":
                return self.B(*args)
            case "C":
                return self.C(*args)
            case "R":
                return self.R(*args)
            case "D":
                return self.D(*args)
        raise KeyError(f"unknown relation '{relation}'")

    def c_triples(self) -> list[tuple[int, int, int]]:
        """ the C triples (z, x, y) with x < y """
        return [(int(z), int(x), int(y)) for z, x, y in zip(*np.nonzero(self.c_table), strict=True) if x < y]

    def substructure(self, elements: Sequence[int]) -> "FiniteStructure":
        index = np.array(elements, dtype=int)
        return FiniteStructure(
            FinitePoset(self.poset.leq_table[np.ix_(index, index)]),
            self.c_table[np.ix_(index, index, index)]
        )

    def transported(self, bijection: Sequence[int]) -> "FiniteStructure":
        """ the copy in which element i is renamed to bijection[i] """
        index = np.array(bijection, dtype=int)
        leq_table = np.zeros_like(self.poset.leq_table)
        leq_table[np.ix_(index, index)] = self.poset.leq_table
        c_table = np.zeros_like(self.c_table)
        c_table[np.ix_(index, index, index)] = self.c_table
        return FiniteStructure(FinitePoset(leq_table), c_table)

    def without_c(self) -> "FiniteStructure":
        return FiniteStructure(self.poset)

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "leq": self.poset.leq_table.astype(int).tolist(),
            "C": [list(x) for x in self.c_triples()]
        }

    @classmethod
    def create_from_json(cls, structure_json: dict[str, Any]) -> "FiniteStructure":
        n = int(structure_json["n"])
        leq_table = np.array(structure_json.get("leq", np.eye(n, dtype=bool).tolist()), dtype=bool)
        if leq_table.shape != (n, n):
            raise DimensionMismatchError("leq", (n, n), leq_table.shape)
        c_table = np.zeros((n, n, n), dtype=bool)
        for triple in structure_json.get("C", []):
            if (len(triple) != 3) or any((not 0 <= x < n) for x in triple):
                raise DimensionMismatchError("C", (n, n, n), tuple(triple))
            z, x, y = triple
            c_table[z, x, y] = True
            c_table[z, y, x] = True
        return cls(FinitePoset(leq_table), c_table)

    def key(self) -> bytes:
        return self.poset.leq_table.tobytes() + self.c_table.tobytes()

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FiniteStructure) and (self.key() == other.key())

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        less = [f"{i}<{j}" for i in range(self.n) for j in range(self.n) if self.lt(i, j)]
        c = [f"C({z},{x}{y})" for z, x, y in self.c_triples()]
        return f"[n={self.n}; {', '.join(less + c) or 'no relations'}]"

    def __repr__(self) -> str:
        return f"FiniteStructure{self}"


class ConvexExtension:

    def __init__(self, base: FiniteStructure, order: Sequence[int]) -> None:
        self.base = base
        self.order: tuple[int, ...] = tuple(order)

    def position(self) -> dict[int, int]:
        return {element: index for index, element in enumerate(self.order)}

    def precedes(self, x: int, y: int) -> bool:
        position = self.position()
        return position[x] < position[y]

    def to_json(self) -> list[int]:
        return list(self.order)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ConvexExtension) and (self.order == other.order) and (self.base == other.base)

    def __hash__(self) -> int:
        return hash(self.order)

    def __str__(self) -> str:
        return " < ".join(str(x) for x in self.order)


# validation

class Violation:

    def __init__(self, name: str, witness: tuple[int, ...]) -> None:
        self.name = name
        self.witness = witness

    def __str__(self) -> str:
        return f"{self.name} at {self.witness}"


class ValidationReport:

    def __init__(self) -> None:
        self.violations: list[Violation] = []

    def add(self, name: str, *witness: int) -> None:
        self.violations.append(Violation(name, tuple(witness)))

    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid()

    def __str__(self) -> str:
        if not self.violations:
            return "valid"
        return "\n".join(str(x) for x in self.violations)


def validate(structure: FiniteStructure) -> ValidationReport:
    """ list every local invariant the tables violate, each with a witness tuple """
    n = structure.n
    if structure.c_table.shape != (n, n, n):
        raise DimensionMismatchError("C", (n, n, n), structure.c_table.shape)
    report = ValidationReport()
    for i in range(n):
        if not structure.leq(i, i):
            report.add("reflexivity", i)
    for i, j in permutations(range(n), 2):
        if structure.leq(i, j) and structure.leq(j, i):
            report.add("antisymmetry", i, j)
    for i, j, k in permutations(range(n), 3):
        if structure.leq(i, j) and structure.leq(j, k) and not structure.leq(i, k):
            report.add("transitivity", i, j, k)
    for i in range(n):
        for x, y in combinations(structure.poset.up_set(i), 2):
            if structure.perp(x, y):
                report.add("up-set is a chain", i, x, y)
    for z in range(n):
        for x in range(n):
            for y in range(n):
                if not structure.C(z, x, y):
                    continue
                if not structure.C(z, y, x):
                    report.add("C symmetric in the last two arguments", z, x, y)
                if not structure.perp(x, y):
                    report.add("C(z, xy) requires x || y", z, x, y)
                if not (structure.perp(z, x) and structure.perp(z, y)):
                    report.add("C(z, xy) requires z || x and z || y", z, x, y)
    return report


def induced_structure(points: Sequence[Node]) -> FiniteStructure:
    seen: set[Node] = set()
    for point in points:
        if point in seen:
            raise DuplicatePointsError(point)
        seen.add(point)
    n = len(points)
    leq_table = np.array([[leq(a, b) for b in points] for a in points], dtype=bool).reshape((n, n))
    c_table = np.zeros((n, n, n), dtype=bool)
    for z in range(n):
        for x, y in combinations(range(n), 2):
            if rel_C(points[z], points[x], points[y]):
                c_table[z, x, y] = True
                c_table[z, y, x] = True
    return FiniteStructure(FinitePoset(leq_table), c_table)


# isomorphisms

def _signature(structure: FiniteStructure, i: int) -> tuple[int, int, int, int]:
    return (
        len(structure.poset.up_set(i)),
        len(structure.poset.down_set(i)),
        int(structure.c_table[i].sum()),
        int(structure.c_table[:, i, :].sum())
    )


def find_isomorphisms(a: FiniteStructure, b: FiniteStructure) -> list[tuple[int, ...]]:
    """
    all bijections preserving <= and C in both directions, as tuples mapping element i of a to element result[i] of b
    """
    if a.n != b.n:
        return []
    check_bound("isomorphism points", a.n, "bounds.isomorphism points")
    signatures_b = [_signature(b, j) for j in range(b.n)]
    candidates = [[j for j in range(b.n) if signatures_b[j] == _signature(a, i)] for i in range(a.n)]
    result: list[tuple[int, ...]] = []
    mapping: list[int] = []

    def consistent(i: int, j: int) -> bool:
        for k, image in enumerate(mapping):
            if (a.leq(i, k) != b.leq(j, image)) or (a.leq(k, i) != b.leq(image, j)):
                return False
        for k, image in enumerate(mapping):
            for m, other in enumerate(mapping):
                if (
                    (a.C(i, k, m) != b.C(j, image, other))
                    or (a.C(k, i, m) != b.C(image, j, other))
                    or (a.C(k, m, i) != b.C(image, other, j))
                ):
                    return False
        return True

    def search(i: int) -> None:
        if i == a.n:
            result.append(tuple(mapping))
            return
        for j in candidates[i]:
            if (j not in mapping) and consistent(i, j):
                mapping.append(j)
                search(i + 1)
                mapping.pop()

    search(0)
    return result


def are_isomorphic(a: FiniteStructure, b: FiniteStructure) -> bool:
    return len(find_isomorphisms(a, b)) > 0


# convex linear extensions

def is_convex_extension(structure: FiniteStructure, order: Sequence[int], strict_betweenness: bool = False) -> bool:
    """
    True if order (least element first) refines <, keeps C outsiders outside and keeps betweenness.
    By default betweenness means that a point branching off above a subtree is never placed inside it,
    strict_betweenness demands y strictly between x and z whenever B(x, y, z).
    """
    if sorted(order) != list(range(structure.n)):
        return False
    position = {element: index for index, element in enumerate(order)}
    elements = range(structure.n)
    for x, y in permutations(elements, 2):
        if structure.lt(x, y) and position[x] > position[y]:
            return False
    for x, y, z in permutations(elements, 3):
        if structure.B(x, y, z):
            if strict_betweenness:
                if not (position[x] < position[y] < position[z] or position[z] < position[y] < position[x]):
                    return False
            elif structure.lt(x, y) and (min(position[x], position[y]) < position[z] < max(position[x], position[y])):
                return False
        if structure.C(x, y, z):
            if min(position[y], position[z]) < position[x] < max(position[y], position[z]):
                return False
    return True


def _layer(structure: FiniteStructure, elements: list[int]) -> list[tuple[int, ...]]:
    if not elements:
        return [()]
    maxima = structure.poset.maximal_elements(elements)
    if len(maxima) == 1:
        top = maxima[0]
        return [rest + (top,) for rest in _layer(structure, [x for x in elements if x != top])]
    reference = maxima[0]
    far = [m for m in maxima if (m != reference) and not any(structure.C(x, reference, m) for x in maxima)]
    near = [m for m in maxima if m not in far]
    near_block = [x for x in elements if any(structure.leq(x, m) for m in near)]
    far_block = [x for x in elements if any(structure.leq(x, m) for m in far)]
    result: list[tuple[int, ...]] = []
    for first in _layer(structure, near_block):
        for second in _layer(structure, far_block):
            result.append(first + second)
            result.append(second + first)
    return result


def convex_extensions(structure: FiniteStructure) -> list[ConvexExtension]:
    """ every convex linear extension, built top down: each block of subtrees is ordered independently and the two
    halves of a split are concatenated in both orders """
    # the layering reads the C table as a tree, which only makes sense for structures of the age
    from arbor.engine import is_in_age

    if not is_in_age(structure):
        raise NonRealizableError(f"structure {structure} does not embed into the model")
    orders = sorted(set(_layer(structure, list(range(structure.n)))))
    return [ConvexExtension(structure, order) for order in orders]


def convex_extensions_by_filter(structure: FiniteStructure, strict_betweenness: bool = False) -> list[ConvexExtension]:
    check_bound("extension filter points", structure.n, "bounds.extension filter")
    return [
        ConvexExtension(structure, order)
        for order in permutations(range(structure.n))
        if is_convex_extension(structure, order, strict_betweenness)
    ]


# age enumeration

def shape_key(points: Sequence[Node]) -> str:
    """ canonical code of the tree spanned by the points: equal codes iff the induced structures are isomorphic """
    if not points:
        return ""
    positions = {x.depth: x for x in points}
    splits = {divergence(a, b) for a, b in combinations(points, 2)} - {None}
    top = min([*positions, *splits])
    if top in positions:
        rest = [x for x in points if x != positions[top]]
        return f"P({shape_key(rest)})"
    left = [x for x in points if top in x.turns]
    right = [x for x in points if top not in x.turns]
    return "B(" + ",".join(sorted((shape_key(left), shape_key(right)))) + ")"


@cache
def age_representatives(n: int) -> tuple[tuple[Node, ...], ...]:
    """ one Node set for every isomorphism type of n-point structure in the age """
    check_bound("age structures points", n, "bounds.age structures")
    level: dict[str, tuple[Node, ...]] = {"": ()}
    for size in range(1, n + 1):
        next_level: dict[str, tuple[Node, ...]] = {}
        for points in level.values():
            for candidate in witness_grid(points):
                if candidate in points:
                    continue
                extended = points + (candidate,)
                next_level.setdefault(shape_key(extended), extended)
        level = next_level
        log.info(f"age enumeration: {len(level)} shapes with {size} points")
    return tuple(level[key] for key in sorted(level))


def enumerate_age_structures(n: int, reduce: str = "poset") -> list[FiniteStructure]:
    """
    The finite structures of the age on n points.
    'full' gives one structure per isomorphism type; 'poset' gives one canonical poset per order type together with
    every C labelling of it that occurs in the age.
    """
    if reduce not in REDUCE_MODES:
        raise ValueError(f"unknown reduce mode '{reduce}', expected one of {REDUCE_MODES}")
    structures = [induced_structure(points) for points in age_representatives(n)]
    if reduce == "full":
        return structures
    groups: dict[str, list[FiniteStructure]] = {}
    for structure in structures:
        groups.setdefault(structure.poset.forest_code(), []).append(structure)
    result: list[FiniteStructure] = []
    for code in sorted(groups):
        group = groups[code]
        canonical = group[0].without_c()
        labellings: dict[bytes, FiniteStructure] = {}
        for structure in group:
            for bijection in find_isomorphisms(structure.without_c(), canonical):
                image = structure.transported(bijection)
                labellings.setdefault(image.key(), image)
        result.extend(labellings[key] for key in sorted(labellings))
    return result
