"""
Maps between finite Node sets: rerootings, the flattening into an antichain, the projection onto a chain, and the
checks that tell which kind of map a given finite map is.
Every constructor verifies its own output before returning it.
"""
import logging
from collections.abc import Sequence
from enum import Enum
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Any

import numpy as np

from arbor.model import (
    RELATIONS,
    Node,
    WitnessSearchError,
    divergence,
    leq,
    lt,
    perp,
    pick_depth,
    pick_turn,
    rel_C,
    rel_D,
    rel_R,
)
from arbor.engine import embed_structure, realize_forest
from arbor.structures import FinitePoset, FiniteStructure, find_isomorphisms, induced_structure

log = logging.getLogger(__name__)


class RerootSpecError(Exception):

    def __init__(self, reason: str) -> None:
        super().__init__(f"invalid rerooting set: {reason}")


class MappingError(Exception):

    def __init__(self, reason: str) -> None:
        super().__init__(f"invalid finite map: {reason}")


class NotAnAntichainError(Exception):

    def __init__(self, first: Node, second: Node) -> None:
        super().__init__(f"expected pairwise incomparable points, but {first} and {second} are comparable")


class MapClass(Enum):
    FLAT = "flat"
    THIN = "thin"
    ORDER_PRESERVING = "order-preserving"
    REROOTING_LIKE = "rerooting-like"
    OTHER = "other"


class MappedSet:
    """ the restriction of a map to a finite set: source[i] is sent to image[i] """

    def __init__(self, source: Sequence[Node], image: Sequence[Node]) -> None:
        if len(source) != len(image):
            raise MappingError(f"{len(source)} source points but {len(image)} images")
        if len(set(source)) != len(source):
            raise MappingError("repeated source point")
        if len(set(image)) != len(image):
            raise MappingError("the map is not injective")
        self.source: tuple[Node, ...] = tuple(source)
        self.image: tuple[Node, ...] = tuple(image)

    @classmethod
    def identity(cls, points: Sequence[Node]) -> "MappedSet":
        return cls(points, points)

    def __call__(self, point: Node) -> Node:
        return self.image[self.source.index(point)]

    def __len__(self) -> int:
        return len(self.source)

    def compose(self, other: "MappedSet") -> "MappedSet":
        """ other after self, other must be defined on the image of self """
        return MappedSet(self.source, [other(x) for x in self.image])

    def to_json(self) -> dict[str, Any]:
        return {"source": [x.to_json() for x in self.source], "image": [x.to_json() for x in self.image]}

    @classmethod
    def create_from_json(cls, mapped_json: dict[str, Any]) -> "MappedSet":
        return cls(
            [Node.create_from_json(x) for x in mapped_json["source"]],
            [Node.create_from_json(x) for x in mapped_json["image"]]
        )

    def __str__(self) -> str:
        return "\n".join(f"{a} -> {b}" for a, b in zip(self.source, self.image, strict=True))


# rerooting

class RerootSpec:
    """ the set S of a rerooting, either everything above a pivot or an explicit chain """

    def __init__(self, pivot: Node | None = None, chain: Sequence[Node] | None = None) -> None:
        if (pivot is None) == (chain is None):
            raise RerootSpecError("give either a pivot or a chain")
        self.pivot = pivot
        self.chain: tuple[Node, ...] | None = tuple(chain) if chain is not None else None

    def select(self, points: Sequence[Node]) -> list[Node]:
        if self.pivot is not None:
            selected = [x for x in points if leq(self.pivot, x)]
        else:
            missing = [x for x in self.chain if x not in points]
            if missing:
                raise RerootSpecError(f"{missing[0]} is not one of the points")
            selected = list(self.chain)
        for a, b in combinations(selected, 2):
            if perp(a, b):
                raise RerootSpecError(f"{a} and {b} are incomparable")
        for x in points:
            if (x not in selected) and any(leq(s, x) for s in selected):
                raise RerootSpecError(f"{x} is above the set but not in it")
        return selected


def rerooted_order(points: Sequence[Node], selected: Sequence[Node]) -> FinitePoset:
    """ the order a rerooting with respect to the selected chain induces on the images of the points """
    n = len(points)
    inside = [x in selected for x in points]
    table = np.eye(n, dtype=bool)
    for i, j in permutations(range(n), 2):
        x, y = points[i], points[j]
        if inside[i] and inside[j]:
            table[i, j] = lt(y, x)
        elif (not inside[i]) and (not inside[j]):
            table[i, j] = lt(x, y)
        elif not inside[i]:
            table[i, j] = perp(x, y)
    return FinitePoset(table)


def _rerooting_bullets_hold(source: Sequence[Node], image: Sequence[Node], selected: Sequence[Node]) -> bool:
    for i, j in permutations(range(len(source)), 2):
        x, y = source[i], source[j]
        fx, fy = image[i], image[j]
        x_in, y_in = x in selected, y in selected
        if x_in and y_in:
            if lt(x, y) != lt(fy, fx):
                return False
        elif (not x_in) and (not y_in):
            if (lt(x, y) != lt(fx, fy)) or (perp(x, y) != perp(fx, fy)):
                return False
        elif not x_in:
            if lt(x, y) and not perp(fx, fy):
                return False
            if perp(x, y) and not lt(fx, fy):
                return False
    return True


def reroot(points: Sequence[Node], spec: RerootSpec) -> MappedSet:
    """ reverse the order on the chain S, keep it elsewhere and swap < with || across the boundary """
    selected = spec.select(points)
    if not selected:
        return MappedSet.identity(points)
    log.debug(f"rerooting {len(points)} points at a chain of {len(selected)}")
    image = realize_forest(rerooted_order(points, selected))
    if not _rerooting_bullets_hold(points, image, selected):
        raise WitnessSearchError(f"rerooting of {points} at {selected} produced {image}")
    return MappedSet(points, image)


def verify_preserves(mapped: MappedSet, relation: str) -> tuple[bool, tuple[Node, ...] | None]:
    """ True if the relation holds on every source tuple exactly when it holds on the image tuple, else the first
    source tuple where it does not """
    evaluate = RELATIONS[relation]
    index = {x: i for i, x in enumerate(mapped.source)}
    for arguments in product(mapped.source, repeat=evaluate.arity):
        images = [mapped.image[index[x]] for x in arguments]
        if evaluate(*arguments) != evaluate(*images):
            return False, arguments
    return True, None


# flattening and projection

def _critical_positions(points: Sequence[Node]) -> list[Fraction]:
    positions = {x.depth for x in points}
    for x in points:
        positions.update(x.turns)
    for a, b in combinations(points, 2):
        split = divergence(a, b)
        if split is not None:
            positions.add(split)
    return sorted(positions)


def flatten(points: Sequence[Node]) -> MappedSet:
    """
    Map the points onto an antichain such that R(a, b, c) iff C(f(c), f(a) f(b)).
    Every point leaves its own path just below its depth, before anything else happens on that path.
    """
    critical = _critical_positions(points)
    image: list[Node] = []
    for x in points:
        following = next((q for q in critical if q > x.depth), x.depth + 1)
        turn = pick_turn(x.depth, following)
        image.append(Node((*x.turns, turn), pick_depth(turn, turn + 1)))
    for a, b in combinations(image, 2):
        if not perp(a, b):
            raise WitnessSearchError(f"flattened points {a} and {b} are comparable")
    n = len(points)
    for i, j, k in permutations(range(n), 3):
        if rel_R(points[i], points[j], points[k]) != rel_C(image[k], image[i], image[j]):
            raise WitnessSearchError(f"flattening breaks R on {points[i]}, {points[j]}, {points[k]}")
    return MappedSet(points, image)


def project_to_chain(points: Sequence[Node]) -> MappedSet:
    """ send every point to the turnless path at its depth, points at the same depth get spread below it """
    ordered = sorted(points, key=lambda x: (x.depth, x.sort_key()))
    depths: dict[Node, Fraction] = {}
    previous: Fraction | None = None
    for x in ordered:
        depth = x.depth
        if (previous is not None) and (depth <= previous):
            following = next((y.depth for y in ordered if y.depth > previous), previous + 1)
            depth = pick_depth(previous, following)
        depths[x] = depth
        previous = depth
    return MappedSet(points, [Node((), depths[x]) for x in points])


# classification of finite maps

def _is_antichain(points: Sequence[Node]) -> bool:
    return all(perp(a, b) for a, b in combinations(points, 2))


def _is_chain(points: Sequence[Node]) -> bool:
    return not any(perp(a, b) for a, b in combinations(points, 2))


def _is_identity(mapped: MappedSet) -> bool:
    return mapped.source == mapped.image


def _is_order_preserving(mapped: MappedSet) -> bool:
    return all(
        leq(x, y) == leq(fx, fy)
        for (x, fx), (y, fy) in permutations(zip(mapped.source, mapped.image, strict=True), 2)
    )


def classify_finite_map(mapped: MappedSet) -> MapClass:
    """
    Flat and thin go by the shape of the image alone and are checked first, the identity is order-preserving
    whatever the shape of its points.
    """
    if not _is_identity(mapped):
        if _is_antichain(mapped.image):
            return MapClass.FLAT
        if _is_chain(mapped.image):
            return MapClass.THIN
    if _is_order_preserving(mapped):
        return MapClass.ORDER_PRESERVING
    for pivot in mapped.source:
        selected = [x for x in mapped.source if leq(pivot, x)]
        if _rerooting_bullets_hold(mapped.source, mapped.image, selected):
            return MapClass.REROOTING_LIKE
    return MapClass.OTHER


def _check_antichain(points: Sequence[Node]) -> None:
    for a, b in combinations(points, 2):
        if not perp(a, b):
            raise NotAnAntichainError(a, b)


def find_flip(points: Sequence[Node]) -> tuple[int, int, tuple[int, ...]] | None:
    """ two points of an antichain that some automorphism of the induced structure swaps while fixing the rest """
    _check_antichain(points)
    structure = induced_structure(points)
    for bijection in find_isomorphisms(structure, structure):
        moved = [i for i, j in enumerate(bijection) if i != j]
        if len(moved) == 2:
            return moved[0], moved[1], bijection
    return None


def leaf_reroot(points: Sequence[Node], leaf: Node) -> MappedSet:
    """ hang the tree spanned by an antichain from the given leaf: the leaf becomes the first to depart and the
    quartet relation D is kept """
    _check_antichain(points)
    if leaf not in points:
        raise MappingError(f"{leaf} is not one of the points")
    n = len(points)
    anchor = points.index(leaf)
    c_table = np.zeros((n, n, n), dtype=bool)
    for z, x, y in permutations(range(n), 3):
        if z == anchor:
            c_table[z, x, y] = True
        elif anchor not in (x, y):
            c_table[z, x, y] = rel_D(points[x], points[y], points[z], leaf)
    structure = FiniteStructure(FinitePoset(np.eye(n, dtype=bool)), c_table)
    return MappedSet(points, embed_structure(structure))

