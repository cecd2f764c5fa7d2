"""
Back and forth on the model: embed finite structures point by point, extend partial isomorphisms and decide age
membership (a finite structure is in the age iff the point by point embedding never gets stuck).
"""
import logging
from collections.abc import Sequence
from fractions import Fraction
from itertools import permutations

from arbor.model import (
    ROOT,
    InvalidPositionError,
    Node,
    WitnessPreconditionError,
    WitnessSearchError,
    below,
    branch_off,
    leq,
    lemma_key_witness,
    rel_C,
    witness_grid,
)
from arbor.structures import FinitePoset, FiniteStructure, NonRealizableError, induced_structure, validate

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


class InvalidPartialIsoError(Exception):

    def __init__(self, reason: str) -> None:
        super().__init__(f"not a partial isomorphism: {reason}")


class AlreadyMappedError(Exception):

    def __init__(self, point: Node) -> None:
        self.point = point
        super().__init__(f"point {point} is already in the domain")


class AgeRejectionError(Exception):

    def __init__(self, index: int) -> None:
        self.index = index
        super().__init__(f"the structure does not embed: element {index} has no image")


class ExtensionError(Exception):
    """ raised when a valid partial isomorphism cannot be extended, always a bug in the model """

    def __init__(self, point: Node) -> None:
        self.point = point
        super().__init__(f"no image found for {point}")


class PartialIso:

    def __init__(self, domain: Sequence[Node], image: Sequence[Node]) -> None:
        if len(domain) != len(image):
            raise InvalidPartialIsoError(f"domain has {len(domain)} points but image has {len(image)}")
        self.domain: tuple[Node, ...] = tuple(domain)
        self.image: tuple[Node, ...] = tuple(image)

    @classmethod
    def identity(cls, points: Sequence[Node]) -> "PartialIso":
        return cls(points, points)

    def first_violation(self) -> str | None:
        """ the first relation the pairing fails to carry over, None if it is a partial isomorphism """
        if len(set(self.domain)) != len(self.domain):
            return "repeated domain point"
        if len(set(self.image)) != len(self.image):
            return "repeated image point"
        source = induced_structure(self.domain)
        target = induced_structure(self.image)
        for i in range(source.n):
            for j in range(source.n):
                if source.leq(i, j) != target.leq(i, j):
                    return f"<= between {self.domain[i]} and {self.domain[j]}"
                for k in range(source.n):
                    if source.C(i, j, k) != target.C(i, j, k):
                        return f"C({self.domain[i]}, {self.domain[j]} {self.domain[k]})"
        return None

    def is_valid(self) -> bool:
        return self.first_violation() is None

    def verify(self) -> None:
        violation = self.first_violation()
        if violation is not None:
            raise InvalidPartialIsoError(violation)

    def __call__(self, point: Node) -> Node:
        return self.image[self.domain.index(point)]

    def __contains__(self, point: Node) -> bool:
        return point in self.domain

    def __len__(self) -> int:
        return len(self.domain)

    def extended(self, point: Node, image: Node) -> "PartialIso":
        return PartialIso(self.domain + (point,), self.image + (image,))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a} -> {b}" for a, b in zip(self.domain, self.image, strict=True)) + "}"


# forth step

def _has_type(structure: FiniteStructure, mapped: Sequence[int], images: Sequence[Node], p: int, q: Node) -> bool:
    """ True if q relates to the images exactly as element p relates to the mapped elements """
    if q in images:
        return False
    for d, image in zip(mapped, images, strict=True):
        if (leq(q, image) != structure.leq(p, d)) or (leq(image, q) != structure.leq(d, p)):
            return False
    for (i, first), (j, second) in permutations(list(zip(mapped, images, strict=True)), 2):
        if (rel_C(q, first, second) != structure.C(p, i, j)) or (rel_C(first, q, second) != structure.C(i, p, j)):
            return False
    return True


def _lowest(structure: FiniteStructure, elements: Sequence[int]) -> int:
    return max(elements, key=lambda x: (len(structure.poset.up_set(x)), -x))


def _recipe(structure: FiniteStructure, mapped: Sequence[int], images: Sequence[Node], p: int) -> Node:
    rho = dict(zip(mapped, images, strict=True))
    lower = [d for d in mapped if structure.lt(d, p)]
    upper = [d for d in mapped if structure.lt(p, d)]
    incomparable = [d for d in mapped if structure.perp(p, d)]
    if lower:
        return lemma_key_witness([rho[x] for x in lower], [rho[x] for x in upper], [rho[x] for x in incomparable])
    if not mapped:
        return ROOT
    if upper:
        v_min = _lowest(structure, upper)
        if all(structure.perp(v_min, w) for w in incomparable):
            return below(rho[v_min])
    # p hangs off a new branch: find the incomparable points on the far side of the split that happens last
    w0 = next(w for w in incomparable if not any(structure.C(w, p, x) for x in incomparable if x != w))
    cluster = [w0] + [w for w in incomparable if (w != w0) and not structure.C(w, p, w0)]
    avoided = [rho[w] for w in incomparable if w not in cluster]
    anchors = [rho[x] for x in upper]
    x = lemma_key_witness([rho[w] for w in cluster], anchors, avoided)
    x2 = lemma_key_witness([rho[w] for w in cluster], anchors + [x], avoided)
    return branch_off(x2, x.depth, x2.depth)


def forth(structure: FiniteStructure, mapped: Sequence[int], images: Sequence[Node], p: int) -> Node | None:
    """
    An image for element p of the structure given the images of the mapped elements, None if there is none.
    The constructive recipe is tried first, its output is checked and the witness grid over the images is searched
    when the recipe does not apply.
    """
    try:
        q = _recipe(structure, mapped, images, p)
        if _has_type(structure, mapped, images, p, q):
            return q
        log.debug(f"forth recipe gave {q} with the wrong type for element {p}, searching the grid")
    except (WitnessPreconditionError, WitnessSearchError, InvalidPositionError, StopIteration) as e:
        log.debug(f"forth recipe not applicable for element {p} ({e}), searching the grid")
    for candidate in witness_grid(images):
        if _has_type(structure, mapped, images, p, candidate):
            return candidate
    return None


def extend_partial_iso(rho: PartialIso, p: Node) -> PartialIso:
    if p in rho:
        raise AlreadyMappedError(p)
    rho.verify()
    k = len(rho)
    structure = induced_structure(rho.domain + (p,))
    q = forth(structure, range(k), rho.image, k)
    if q is None:
        raise ExtensionError(p)
    return rho.extended(p, q)


def embedding_order(structure: FiniteStructure) -> list[int]:
    """ a linear extension of >= from the top down, ties broken by index """
    return sorted(range(structure.n), key=lambda i: (len(structure.poset.up_set(i)), i))


def embed_structure(structure: FiniteStructure) -> list[Node]:
    """ Nodes inducing the structure, element i mapped to result[i] """
    mapped: list[int] = []
    images: list[Node] = []
    for p in embedding_order(structure):
        q = forth(structure, mapped, images, p)
        if q is None:
            raise AgeRejectionError(p)
        mapped.append(p)
        images.append(q)
    by_index = dict(zip(mapped, images, strict=True))
    return [by_index[i] for i in range(structure.n)]


def is_in_age(structure: FiniteStructure) -> bool:
    if not validate(structure).is_valid():
        return False
    try:
        embed_structure(structure)
        return True
    except AgeRejectionError:
        return False


def homogeneity_extend(
        domain: Sequence[Node],
        image: Sequence[Node],
        extra: Sequence[Node],
        iso: Sequence[int] | None = None
) -> PartialIso:
    """
    Extend the isomorphism domain -> image to the extra points.
    :param iso: iso[i] is the index in image of the image of domain[i], positional pairing if missing
    """
    if iso is None:
        iso = range(len(domain))
    rho = PartialIso(domain, [image[i] for i in iso])
    rho.verify()
    for point in extra:
        rho = extend_partial_iso(rho, point)
    return rho


def realize_forest(poset: FinitePoset) -> list[Node]:
    """ Nodes whose order is the given forest, children of a node hanging off it on consecutive branches """
    structure = FiniteStructure(poset)
    if not validate(structure).is_valid():
        raise NonRealizableError(f"not a forest order: {validate(structure)}")
    children: dict[int | None, list[int]] = {}
    for i in range(poset.n):
        children.setdefault(poset.parent(i), []).append(i)
    result: dict[int, Node] = {}
    stack: list[tuple[int | None, Node]] = [(None, ROOT)]
    while stack:
        parent, node = stack.pop()
        siblings = children.get(parent, [])
        for i, child in enumerate(siblings, start=1):
            result[child] = Node(node.turns + (node.depth + i - Fraction(1, 2),), node.depth + len(siblings) + 1)
            stack.append((child, result[child]))
    return [result[i] for i in range(poset.n)]
