"""
Behaviors of canonical functions on the model with a convex order: a behavior says which pair type every pair type
is sent to, and it is consistent when it sends every small realizable configuration to a realizable one.
Consistency is checked configuration by configuration, which is a necessary condition for a canonical function with
that behavior to exist.
"""
import logging
from collections.abc import Callable, Iterable
from enum import Enum
from fractions import Fraction
from functools import cache
from itertools import combinations, permutations, product

from arbor.csp import parse_instance, solve
from arbor.model import Node, hint_precedes, lt, perp
from arbor.structures import ConvexExtension, check_bound, convex_extensions, enumerate_age_structures
from arbor.transformations import RerootSpec, reroot

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


class AsymmetricBehaviorError(Exception):

    def __init__(self, pair_type: "PairType", image: "PairType", reversed_image: "PairType") -> None:
        super().__init__(
            f"{pair_type.name} goes to {image.name} but its reverse goes to {reversed_image.name}, "
            f"expected {image.reverse().name}"
        )


class SameNodeError(Exception):

    def __init__(self, node: Node) -> None:
        super().__init__(f"the point and the constant are both {node}")


class PairType(Enum):
    LT = "<"
    GT = ">"
    PERP_BEFORE = "||<"
    PERP_AFTER = "||>"

    def reverse(self) -> "PairType":
        return _REVERSE[self]

    def is_comparable(self) -> bool:
        return self in (PairType.LT, PairType.GT)


_REVERSE = {
    PairType.LT: PairType.GT,
    PairType.GT: PairType.LT,
    PairType.PERP_BEFORE: PairType.PERP_AFTER,
    PairType.PERP_AFTER: PairType.PERP_BEFORE,
}

# a configuration lists the type of (i, j) for every pair i < j, in the order of combinations(range(k), 2)
Configuration = tuple[PairType, ...]


def pair_type(extension: ConvexExtension, i: int, j: int) -> PairType:
    structure = extension.base
    if structure.lt(i, j):
        return PairType.LT
    if structure.lt(j, i):
        return PairType.GT
    return PairType.PERP_BEFORE if extension.precedes(i, j) else PairType.PERP_AFTER


def configuration_of(extension: ConvexExtension, labels: tuple[int, ...] | None = None) -> Configuration:
    """ the configuration of the structure after renaming element labels[i] to i """
    n = extension.base.n
    labels = tuple(range(n)) if labels is None else labels
    return tuple(pair_type(extension, labels[i], labels[j]) for i, j in combinations(range(n), 2))


def render_configuration(configuration: Configuration) -> str:
    if not configuration:
        return "(empty)"
    k = next(m for m in range(len(configuration) + 2) if m * (m - 1) // 2 == len(configuration))
    return ", ".join(f"{i} {t.value} {j}" for (i, j), t in zip(combinations(range(k), 2), configuration, strict=True))


class Behavior:

    def __init__(self, mapping: dict[PairType, PairType]) -> None:
        missing = [x for x in PairType if x not in mapping]
        if missing:
            raise KeyError(f"behavior has no image for {missing[0].name}")
        for x in PairType:
            if mapping[x.reverse()] != mapping[x].reverse():
                raise AsymmetricBehaviorError(x, mapping[x], mapping[x.reverse()])
        self.mapping = dict(mapping)

    @classmethod
    def from_images(cls, lt_image: PairType, perp_before_image: PairType) -> "Behavior":
        """ the behavior is fixed by where < and the ||< pairs go, the reversed types follow """
        return cls({
            PairType.LT: lt_image,
            PairType.GT: lt_image.reverse(),
            PairType.PERP_BEFORE: perp_before_image,
            PairType.PERP_AFTER: perp_before_image.reverse(),
        })

    @classmethod
    def identity(cls) -> "Behavior":
        return cls.from_images(PairType.LT, PairType.PERP_BEFORE)

    @classmethod
    def all_behaviors(cls) -> list["Behavior"]:
        return [cls.from_images(a, b) for a, b in product(PairType, repeat=2)]

    def __call__(self, pair: PairType) -> PairType:
        return self.mapping[pair]

    def apply(self, configuration: Configuration) -> Configuration:
        return tuple(self.mapping[x] for x in configuration)

    def compose(self, other: "Behavior") -> "Behavior":
        """ other after self """
        return Behavior({x: other(self(x)) for x in PairType})

    def key(self) -> tuple[PairType, PairType]:
        return self.mapping[PairType.LT], self.mapping[PairType.PERP_BEFORE]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Behavior) and (self.key() == other.key())

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return ", ".join(f"{x.value} -> {self.mapping[x].value}" for x in PairType)

    def __repr__(self) -> str:
        return f"Behavior({self})"


class BehaviorClass(Enum):
    FLAT = "flat"
    THIN = "thin"
    ORDER_PRESERVING = "order-preserving"


def classify_behavior(behavior: Behavior) -> BehaviorClass | None:
    lt_image, pb_image = behavior.key()
    if (not lt_image.is_comparable()) and (not pb_image.is_comparable()):
        return BehaviorClass.FLAT
    if lt_image.is_comparable() and pb_image.is_comparable():
        return BehaviorClass.THIN
    if (lt_image == PairType.LT) and not pb_image.is_comparable():
        return BehaviorClass.ORDER_PRESERVING
    return None


CONTRADICTION_PATTERNS: dict[str, Behavior] = {
    "order to ||<, ||< to order": Behavior.from_images(PairType.PERP_BEFORE, PairType.LT),
    "order to ||>, ||< to order": Behavior.from_images(PairType.PERP_AFTER, PairType.LT),
    "order to ||<, ||< to reversed order": Behavior.from_images(PairType.PERP_BEFORE, PairType.GT),
    "order reversed, ||< kept": Behavior.from_images(PairType.GT, PairType.PERP_BEFORE),
}


# realizability

@cache
def realizable_configurations(k: int) -> frozenset[Configuration]:
    """ every configuration of k points that some structure of the age with a convex extension induces """
    result: set[Configuration] = set()
    for structure in enumerate_age_structures(k, reduce="full"):
        for extension in convex_extensions(structure):
            for labels in permutations(range(k)):
                result.add(configuration_of(extension, labels))
    log.info(f"{len(result)} realizable configurations on {k} points")
    return frozenset(result)


def behavior_consistent(behavior: Behavior, k: int = 3) -> tuple[bool, Configuration | None]:
    """
    True if the behavior sends every realizable configuration of k points to a realizable one.
    :return: the verdict and, when it is negative, the first source configuration whose image is not realizable
    """
    check_bound("behavior points", k, "bounds.behavior points")
    realizable = realizable_configurations(k)
    for configuration in sorted(realizable, key=lambda x: [t.value for t in x]):
        if behavior.apply(configuration) not in realizable:
            return False, configuration
    return True, None


def enumerate_surviving_behaviors(k: int = 3) -> list[Behavior]:
    return [x for x in Behavior.all_behaviors() if behavior_consistent(x, k)[0]]


def partition_behaviors(behaviors: Iterable[Behavior]) -> dict[BehaviorClass | None, list[Behavior]]:
    """ group behaviors by class, anything outside the three classes goes under None """
    result: dict[BehaviorClass | None, list[Behavior]] = {}
    for behavior in behaviors:
        result.setdefault(classify_behavior(behavior), []).append(behavior)
    return result


# orbits over one constant

class OrbitLabel(Enum):
    U_LT = "below"
    U_GT = "above"
    U_PERP_BEFORE = "incomparable, before"
    U_PERP_AFTER = "incomparable, after"

    def coarse(self) -> str:
        """ the label without the split of the incomparable points """
        return "incomparable" if self in (OrbitLabel.U_PERP_BEFORE, OrbitLabel.U_PERP_AFTER) else self.value


def orbit_of(p: Node, a: Node, hint: Callable[[Node, Node], bool] = hint_precedes) -> OrbitLabel:
    if p == a:
        raise SameNodeError(p)
    if lt(p, a):
        return OrbitLabel.U_LT
    if lt(a, p):
        return OrbitLabel.U_GT
    return OrbitLabel.U_PERP_BEFORE if hint(p, a) else OrbitLabel.U_PERP_AFTER


# checks with one constant

class CheckResult:

    def __init__(self, name: str, expected: bool, found: bool, detail: str = "") -> None:
        self.name = name
        self.expected = expected
        self.found = found
        self.detail = detail

    @property
    def passed(self) -> bool:
        return self.expected == self.found

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        expected = "realizable" if self.expected else "unrealizable"
        line = f"{verdict:<5}{self.name:<28}expected {expected}"
        return f"{line}  {self.detail}" if self.detail else line


ONE_CONSTANT_CONFIGURATIONS: tuple[tuple[str, str, bool], ...] = (
    ("empty configuration", "", True),
    ("collapse above a", "a < u1\na < z1\nu1 || z1", False),
    ("incomparable below a chain", "a < z1\nz1 < z2\nu1 < a\nu1 || z1", False),
    ("reversed chain, first", "z2 < z1\nu1 || z1\nz2 < u1", False),
    ("reversed chain, second", "z2 < z1\nu1 || z1\nu1 < z2", False),
    (
        "witnesses around a",
        "a < z1\nz1 < z2\nu1 || z1\nu1 < z2\nu2 || z1\nu2 < z2\nu1 || a\nu2 || a",
        True
    ),
)


REROOTING_PATTERN: dict[str, Node] = {
    "a": Node((Fraction(3, 2),), 3),
    "z1": Node((Fraction(3, 2),), 2),
    "z2": Node((), 1),
    "u1": Node((), 2),
    "u2": Node((Fraction(5, 4),), 2),
}
REROOTING_PIVOT = "z1"


def _rerooting_check() -> CheckResult:
    """ reroot the pattern above a and make sure a does not end up below the rerooted chain """
    names = list(REROOTING_PATTERN)
    points = [REROOTING_PATTERN[x] for x in names]
    spec = RerootSpec(pivot=REROOTING_PATTERN[REROOTING_PIVOT])
    mapped = reroot(points, spec)
    a = REROOTING_PATTERN["a"]
    selected = spec.select(points)
    below_chain = [x for x in selected if lt(mapped(a), mapped(x))]
    detail = ", ".join(f"f({name}) = {mapped(x)}" for name, x in zip(names, points, strict=True))
    found = (not below_chain) and all(perp(mapped(a), mapped(x)) for x in selected)
    return CheckResult("rerooting above a", True, found, detail)


def one_constant_checks() -> list[CheckResult]:
    results: list[CheckResult] = []
    for name, text, expected in ONE_CONSTANT_CONFIGURATIONS:
        assignment = solve(parse_instance(text))
        detail = ""
        if assignment is not None:
            detail = ", ".join(f"{x} = {node}" for x, node in assignment.items())
        results.append(CheckResult(name, expected, assignment is not None, detail))
    results.append(_rerooting_check())
    failed = [x.name for x in results if not x.passed]
    if failed:
        log.warning(f"one-constant checks failed: {', '.join(failed)}")
    return results


# reports

def render_behavior_table(behaviors: Iterable[Behavior] | None = None, k: int = 3) -> str:
    """ one line per behavior: its images, the verdict, and the class or the rejected configuration """
    if behaviors is None:
        behaviors = Behavior.all_behaviors()
    lines = [f"{'<':<6}{'||<':<6}{'verdict':<10}class or certificate"]
    for behavior in behaviors:
        lt_image, pb_image = behavior.key()
        consistent, certificate = behavior_consistent(behavior, k)
        if consistent:
            behavior_class = classify_behavior(behavior)
            remark = behavior_class.value if behavior_class is not None else "outside the three classes"
        else:
            remark = f"{render_configuration(certificate)}  =>  {render_configuration(behavior.apply(certificate))}"
        verdict = "survives" if consistent else "rejected"
        lines.append(f"{lt_image.value:<6}{pb_image.value:<6}{verdict:<10}{remark}")
    return "\n".join(lines)


def render_check_report(results: Iterable[CheckResult]) -> str:
    return "\n".join(str(x) for x in results)
