"""
Exact coordinate model of the generic binary branching semilinear order.

A Node is a point of a downward growing binary tree: ``depth`` is its position (smaller depth = higher up, so larger
in the order) and ``turns`` are the positions above it where its path took the branching side. Depth positions have an
odd reduced denominator, turn positions an even one, so the two never collide.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from itertools import combinations, pairwise, permutations
from random import Random
from typing import Any

from arbor.globals import GlobalSettings
from arbor.utils import RationalFormatError, format_rational, parse_rational

log = logging.getLogger(__name__)

DEPTH_CLASS = 1
TURN_CLASS = 0


class InvalidPositionError(Exception):

    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidNodeError(Exception):

    def __init__(self, position: Any, reason: str) -> None:
        self.position = position
        super().__init__(f"invalid position '{position}': {reason}")


class WitnessPreconditionError(Exception):

    def __init__(self, relation: str, *nodes: Node) -> None:
        self.relation = relation
        self.nodes = nodes
        super().__init__(f"precondition violated: {relation} ({', '.join(str(x) for x in nodes)})")


class WitnessSearchError(Exception):
    """ raised when a witness that must exist is not found, always a bug in the model """
    pass


def position_class(position: Fraction) -> int:
    return position.denominator % 2


def is_depth_class(position: Fraction) -> bool:
    return position_class(position) == DEPTH_CLASS


def is_turn_class(position: Fraction) -> bool:
    return position_class(position) == TURN_CLASS


class Node:

    def __init__(self, turns: Iterable[Fraction | int], depth: Fraction | int) -> None:
        depth = Fraction(depth)
        if not is_depth_class(depth):
            raise InvalidNodeError(format_rational(depth), "depth must have an odd denominator")
        sorted_turns = sorted(Fraction(x) for x in turns)
        for turn in sorted_turns:
            if not is_turn_class(turn):
                raise InvalidNodeError(format_rational(turn), "turn must have an even denominator")
            if turn >= depth:
                raise InvalidNodeError(format_rational(turn), f"turn must be below depth {format_rational(depth)}")
        for first, second in pairwise(sorted_turns):
            if first == second:
                raise InvalidNodeError(format_rational(first), "duplicate turn")
        self.turns: tuple[Fraction, ...] = tuple(sorted_turns)
        self.depth: Fraction = depth

    def turns_below(self, position: Fraction) -> tuple[Fraction, ...]:
        return tuple(x for x in self.turns if x < position)

    def sort_key(self) -> tuple[tuple[Fraction, ...], Fraction]:
        return self.turns, self.depth

    def to_json(self) -> dict[str, Any]:
        return {"turns": [format_rational(x) for x in self.turns], "depth": format_rational(self.depth)}

    @classmethod
    def create_from_json(cls, node_json: dict[str, Any]) -> Node:
        if (not isinstance(node_json, dict)) or ("depth" not in node_json):
            raise InvalidNodeError(node_json, "expected an object with 'turns' and 'depth'")
        try:
            return cls(
                [parse_rational(x) for x in node_json.get("turns", [])],
                parse_rational(node_json["depth"])
            )
        except RationalFormatError as e:
            raise InvalidNodeError(node_json, str(e)) from e

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Node):
            return (self.depth == other.depth) and (self.turns == other.turns)
        return False

    def __lt__(self, other: Node) -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return hash((self.turns, self.depth))

    def __str__(self) -> str:
        return f"<{{{','.join(format_rational(x) for x in self.turns)}}},{format_rational(self.depth)}>"

    def __repr__(self) -> str:
        return f"Node{self}"


ROOT = Node((), 0)


# positions

def _pick(lo: Fraction, hi: Fraction, parity: int, avoid: Iterable[Fraction]) -> Fraction:
    """ the position of the wanted class nearest to the midpoint of (lo, hi), preferring small denominators """
    if not lo < hi:
        raise InvalidPositionError(f"empty interval ({format_rational(lo)}, {format_rational(hi)})")
    avoid = set(avoid)
    mid = (lo + hi) / 2
    if (position_class(mid) == parity) and (mid not in avoid):
        return mid
    denominator = DEPTH_CLASS if parity == DEPTH_CLASS else 2
    while True:
        first = math.floor(lo * denominator) + 1
        last = math.ceil(hi * denominator) - 1
        candidates = [
            x for x in (Fraction(p, denominator) for p in range(first, last + 1))
            if (position_class(x) == parity) and (x not in avoid)
        ]
        if candidates:
            return min(candidates, key=lambda x: (abs(x - mid), x))
        denominator += 2


def pick_depth(lo: Fraction, hi: Fraction) -> Fraction:
    return _pick(Fraction(lo), Fraction(hi), DEPTH_CLASS, ())


def pick_turn(lo: Fraction, hi: Fraction, avoid: Iterable[Fraction] = ()) -> Fraction:
    return _pick(Fraction(lo), Fraction(hi), TURN_CLASS, avoid)


def path_node(a: Node, depth: Fraction) -> Node:
    """ the point at the given depth on the path of a, continued straight below a """
    return Node(a.turns_below(depth), depth)


def toggled_node(a: Node, turn: Fraction) -> Node:
    """ a point leaving the path of a at the given turn position """
    turns = list(a.turns_below(turn))
    if turn not in a.turns:
        turns.append(turn)
    return Node(turns, pick_depth(turn, turn + 1))


# relations

def _first_turn_difference(first: Iterable[Fraction], second: Iterable[Fraction], bound: Fraction) -> Fraction | None:
    difference = [x for x in set(first).symmetric_difference(second) if x < bound]
    return min(difference) if difference else None


def _first_difference(a: Node, b: Node, bound: Fraction) -> Fraction | None:
    return _first_turn_difference(a.turns, b.turns, bound)


def eq(a: Node, b: Node) -> bool:
    return a == b


def neq(a: Node, b: Node) -> bool:
    return a != b


def leq(a: Node, b: Node) -> bool:
    return (b.depth <= a.depth) and (b.turns == a.turns_below(b.depth))


def lt(a: Node, b: Node) -> bool:
    return (a != b) and leq(a, b)


def gt(a: Node, b: Node) -> bool:
    return lt(b, a)


def geq(a: Node, b: Node) -> bool:
    return leq(b, a)


def perp(a: Node, b: Node) -> bool:
    return _first_difference(a, b, min(a.depth, b.depth)) is not None


def divergence(a: Node, b: Node) -> Fraction | None:
    """ the turn position where the paths of two incomparable nodes split, None if they are comparable """
    return _first_difference(a, b, min(a.depth, b.depth))


def rel_C(z: Node, x: Node, y: Node) -> bool:
    split = divergence(x, y)
    if split is None:
        return False
    departure = divergence(z, x)
    return (departure is not None) and (departure < split)


def rel_B(x: Node, y: Node, z: Node) -> bool:
    return (
        (lt(x, y) and lt(y, z))
        or (lt(z, y) and lt(y, x))
        or (lt(x, y) and perp(y, z))
        or (lt(z, y) and perp(y, x))
    )


def rel_R(x: Node, y: Node, z: Node) -> bool:
    return (
        rel_C(z, x, y)
        or (lt(x, z) and lt(y, z))
        or (perp(x, z) and perp(y, z) and (lt(x, y) or lt(y, x)))
    )


def rel_D(x: Node, y: Node, u: Node, v: Node) -> bool:
    return (rel_C(u, x, y) and rel_C(v, x, y)) or (rel_C(x, u, v) and rel_C(y, u, v))


# chain relations on rationals

def _increasing(*values: Fraction) -> bool:
    return all(first < second for first, second in pairwise(values))


def chain_Betw(x: Fraction, y: Fraction, z: Fraction) -> bool:
    return _increasing(x, y, z) or _increasing(z, y, x)


def chain_Cyc(x: Fraction, y: Fraction, z: Fraction) -> bool:
    return _increasing(x, y, z) or _increasing(y, z, x) or _increasing(z, x, y)


def chain_Sep(x1: Fraction, y1: Fraction, x2: Fraction, y2: Fraction) -> bool:
    return any(_increasing(*pattern) for pattern in (
        (x1, x2, y1, y2), (x1, y2, y1, x2), (y1, x2, x1, y2), (y1, y2, x1, x2),
        (x2, x1, y2, y1), (x2, y1, y2, x1), (y2, x1, x2, y1), (y2, y1, x2, x1),
    ))


class Relation:
    """ a named relation of the signature, evaluated on Nodes """

    def __init__(self, name: str, arity: int, evaluate: Callable[..., bool], symbol: str | None = None) -> None:
        self.name = name
        self.arity = arity
        self.evaluate = evaluate
        self.symbol = symbol

    def __call__(self, *nodes: Node) -> bool:
        return self.evaluate(*nodes)

    def __str__(self) -> str:
        return self.name


RELATIONS: dict[str, Relation] = {
    "eq": Relation("eq", 2, eq, "="),
    "neq": Relation("neq", 2, neq, "!="),
    "leq": Relation("leq", 2, leq, "<="),
    "lt": Relation("lt", 2, lt, "<"),
    "gt": Relation("gt", 2, gt, ">"),
    "geq": Relation("geq", 2, geq, ">="),
    "perp": Relation("perp", 2, perp, "||"),
    "B": Relation("B", 3, rel_B),
    "C": Relation("C", 3, rel_C),
    "R": Relation("R", 3, rel_R),
    "D": Relation("D", 4, rel_D),
}


# axiom witnesses

def between(a: Node, b: Node) -> Node:
    if not lt(a, b):
        raise WitnessPreconditionError("a < b", a, b)
    result = path_node(a, pick_depth(b.depth, a.depth))
    if not (lt(a, result) and lt(result, b)):
        raise WitnessSearchError(f"between({a}, {b}) produced {result}")
    return result


def above(a: Node) -> Node:
    return path_node(a, a.depth - 1)


def below(a: Node) -> Node:
    return Node(a.turns, a.depth + 1)


def branch_off(a: Node, lo: Fraction, hi: Fraction, avoid: Iterable[Fraction] = ()) -> Node:
    """ a node incomparable to a whose divergence from a is strictly inside (lo, hi) and not in avoid """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise WitnessPreconditionError(f"lo < hi ({format_rational(lo)}, {format_rational(hi)})", a)
    if hi > a.depth:
        raise WitnessPreconditionError(f"hi <= depth ({format_rational(hi)})", a)
    turn = pick_turn(lo, hi, avoid)
    result = toggled_node(a, turn)
    if divergence(a, result) != turn:
        raise WitnessSearchError(f"branch_off({a}) produced {result}")
    return result


def common_upper_bound(points: Sequence[Node]) -> Node:
    """ a node above every given node """
    if not points:
        return ROOT
    lowest = min(min((x.depth, *x.turns)) for x in points)
    return Node((), math.floor(lowest) - 1)


def nice_witness(x: Node, y: Node) -> Node:
    """ z > x with z still incomparable to y """
    split = divergence(x, y)
    if split is None:
        raise WitnessPreconditionError("x || y", x, y)
    return path_node(x, pick_depth(split, x.depth))


def split_witness(a: Node, b: Node, c: Node) -> Node:
    """ for three pairwise incomparable nodes, a node above exactly two of them and incomparable to the third """
    for outsider, first, second in ((a, b, c), (b, a, c), (c, a, b)):
        if rel_C(outsider, first, second):
            return path_node(first, pick_depth(divergence(outsider, first), divergence(first, second)))
    raise WitnessPreconditionError("pairwise incomparable", a, b, c)


def refine_upper_bound(a: Node, b: Node, z: Node) -> Node:
    """ u with a, b < u < z for incomparable a, b below z, so that no pair has a least upper bound """
    split = divergence(a, b)
    if split is None:
        raise WitnessPreconditionError("a || b", a, b)
    if not (lt(a, z) and lt(b, z)):
        raise WitnessPreconditionError("a, b < z", a, b, z)
    return path_node(a, pick_depth(z.depth, split))


def lemma_key_witness(upper: Sequence[Node], lower: Sequence[Node], avoided: Sequence[Node]) -> Node:
    """
    Find x with U < x < V and x incomparable to every node of W.
    :param upper: U, must be non-empty
    :param lower: V, every node above every node of U
    :param avoided: W, incomparable to U and departing from every incomparable pair of U before the pair splits
    :return: the witness, already verified
    """
    if not upper:
        raise WitnessPreconditionError("U non-empty")
    for u in upper:
        for v in lower:
            if not lt(u, v):
                raise WitnessPreconditionError("u < v", u, v)
    for w in avoided:
        for u in upper:
            if not perp(w, u):
                raise WitnessPreconditionError("w || u", w, u)
    limits = [u.depth for u in upper]
    for u1, u2 in combinations(upper, 2):
        split = divergence(u1, u2)
        if split is None:
            continue
        limits.append(split)
        for w in avoided:
            if not rel_C(w, u1, u2):
                raise WitnessPreconditionError("C(w, u1 u2)", w, u1, u2)
    limit = min(limits)
    common_turns = min(upper).turns_below(limit)
    floor = [v.depth for v in lower]
    for w in avoided:
        departure = _first_turn_difference(common_turns, w.turns, min(w.depth, limit))
        if departure is None:
            raise WitnessSearchError(f"{w} does not leave the common path of U above {format_rational(limit)}")
        floor.append(departure)
    lo = max(floor) if floor else limit - 1
    depth = pick_depth(lo, limit)
    result = Node((x for x in common_turns if x < depth), depth)
    if not (
        all(lt(u, result) for u in upper)
        and all(lt(result, v) for v in lower)
        and all(perp(result, w) for w in avoided)
    ):
        raise WitnessSearchError(f"witness {result} for U={upper} V={lower} W={avoided}")
    log.debug(f"key witness window ({format_rational(lo)}, {format_rational(limit)}) -> {result}")
    return result


# witness grid

def on_extended_path(a: Node, b: Node) -> bool:
    """ True if b lies on the path of a continued straight downwards past a """
    return b.turns == a.turns_below(b.depth)


def _critical_positions(a: Node, points: Sequence[Node]) -> list[Fraction]:
    """ the positions on the extended path of a where some point sits or leaves the path """
    result: set[Fraction] = set()
    for b in points:
        if on_extended_path(a, b):
            result.add(b.depth)
        else:
            result.add(_first_difference(a, b, b.depth))
    return sorted(result)


def qf_type(p: Node, points: Sequence[Node]) -> tuple[bool, ...]:
    """ the quantifier-free {=, <=, C} type of p over the given points """
    flags: list[bool] = []
    for a in points:
        flags.extend((p == a, leq(p, a), leq(a, p)))
    for i, j in combinations(range(len(points)), 2):
        flags.append(rel_C(p, points[i], points[j]))
    for i, j in permutations(range(len(points)), 2):
        flags.append(rel_C(points[i], p, points[j]))
    return tuple(flags)


def witness_grid(points: Sequence[Node]) -> list[Node]:
    """
    One node for every quantifier-free 1-type over the given points (the points themselves included).
    For every point a the extended path of a is cut at its critical positions; every gap gets a node on the path and
    a node leaving the path inside the gap.
    """
    if not points:
        return [ROOT]
    candidates: list[Node] = list(points)
    for a in points:
        critical = _critical_positions(a, points)
        bounds = [critical[0] - 2, *critical, critical[-1] + 2]
        for lo, hi in pairwise(bounds):
            candidates.append(path_node(a, pick_depth(lo, hi)))
            candidates.append(toggled_node(a, pick_turn(lo, hi)))
    result: list[Node] = []
    seen: set[tuple[bool, ...]] = set()
    for candidate in candidates:
        key = qf_type(candidate, points)
        if key not in seen:
            seen.add(key)
            result.append(candidate)
    return result


# oracles

def c_by_witness_search(z: Node, x: Node, y: Node, size: int | None = None) -> bool:
    """ C(z, xy) decided by searching u > x, y with u incomparable to z among path points of x """
    if not perp(x, y):
        return False
    if size is None:
        size = GlobalSettings.get("witness grid.oracle size")
    positions = {x.depth, y.depth, z.depth, *x.turns, *y.turns, *z.turns}
    for first, second in combinations((x, y, z), 2):
        split = divergence(first, second)
        if split is not None:
            positions.add(split)
    upper = sorted(q for q in positions if q <= x.depth)
    gaps = list(pairwise([upper[0] - 1, *upper]))
    per_gap = max(1, size // len(gaps))
    for lo, hi in gaps:
        step = (hi - lo) / per_gap
        for i in range(per_gap):
            u = path_node(x, pick_depth(lo + step * i, lo + step * (i + 1)))
            if lt(x, u) and lt(y, u) and perp(u, z):
                return True
    return False


def not_b_by_witness_search(a: Node, b: Node, c: Node) -> bool:
    """ the existential positive form of not B(a, b, c), the witness ranging over the grid over {a, b, c} """
    if (a == b) or (b == c) or (c == a):
        return True
    return any(rel_B(a, x, b) and rel_B(b, x, c) for x in witness_grid((a, b, c)))


def leq_via_R(a: Node, b: Node) -> bool:
    """ a <= b defined from R alone: no c has R(b, c, a) """
    return not any(rel_R(b, c, a) for c in witness_grid((a, b)))


# precedence hint, the post-order of the tree restricted to concrete nodes

def hint_precedes(a: Node, b: Node) -> bool:
    """ True if a comes strictly before b: lower nodes first, and of two incomparable nodes the one turning at the
    divergence comes after """
    if a == b:
        return False
    if leq(a, b):
        return True
    if leq(b, a):
        return False
    return divergence(a, b) in b.turns


def hint_order(points: Sequence[Node]) -> list[int]:
    """ indices of the points sorted by the precedence hint """
    return sorted(range(len(points)), key=lambda i: _HintKey(points[i]))


class _HintKey:

    def __init__(self, node: Node) -> None:
        self.node = node

    def __lt__(self, other: _HintKey) -> bool:
        return hint_precedes(self.node, other.node)


# sampling

def random_node(rng: Random, max_depth: int | None = None, max_turns: int | None = None) -> Node:
    if max_depth is None:
        max_depth = GlobalSettings.get("sampling.max depth")
    if max_turns is None:
        max_turns = GlobalSettings.get("sampling.max turns")
    depth = Fraction(rng.randint(1, 3 * max_depth), 3)
    candidates = [Fraction(k, 4) for k in range(1, math.ceil(4 * depth)) if (k % 4) and (Fraction(k, 4) < depth)]
    turns = rng.sample(candidates, min(rng.randint(0, max_turns), len(candidates)))
    return Node(turns, depth)


def random_nodes(rng: Random, count: int, distinct: bool = True) -> list[Node]:
    result: list[Node] = []
    attempts = 0
    while (len(result) < count) and (attempts < 50 * count):
        node = random_node(rng)
        attempts += 1
        if distinct and (node in result):
            continue
        result.append(node)
    return result
